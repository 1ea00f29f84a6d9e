//! Correspondences: a manifold label with two covering sides, composed by
//! the fibered product. The composite is represented by its middle-sphere
//! shadow: the product permutation action on pairs of sheets over the union
//! of the two middle branch loci, plus outer-degree bookkeeping and formal
//! branch-locus unions.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::covering::{check_coloring, CoveringError, PermRep};
use crate::perm::Perm;
use crate::presentation::{Presentation, UnionFind};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ComposeError {
    #[error("covering side has degree zero")]
    ZeroDegree,
    #[error("marked component {component} does not occur in branch locus {locus}")]
    MarkedNotInLocus { component: String, locus: String },
    #[error("target graph {left} of the left factor differs from source graph {right} of the right factor")]
    Composability { left: String, right: String },
    #[error("side partition misses generator {0} of the middle diagram")]
    SidePartition(usize),
    #[error("{side} extension must be the identity on generator {generator}")]
    ExtensionNotIdentity { side: String, generator: usize },
    #[error("{side} extension has degree {got}, expected {expected}")]
    ExtensionDegree {
        side: String,
        got: usize,
        expected: usize,
    },
    #[error("{side} extension fails the relator check: {source}")]
    ExtensionInvalid { side: String, source: CoveringError },
    #[error("sheet sets of the chain cannot be identified: middle factor has degrees {left} and {right}")]
    SheetIdentification { left: usize, right: usize },
}

/// One covering arrow of a correspondence: a verified representation over a
/// named branch locus, with the marked subgraph it restricts to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoveringSide {
    pub rep: PermRep,
    pub branch_locus: String,
    /// Component labels of the branch locus that make up the marked subgraph.
    pub marked: BTreeSet<String>,
    /// Name of the marked subgraph (an object label).
    pub graph: String,
}

impl CoveringSide {
    pub fn new(
        rep: PermRep,
        branch_locus: impl Into<String>,
        marked: BTreeSet<String>,
        graph: impl Into<String>,
    ) -> Result<Self, ComposeError> {
        if rep.degree == 0 {
            return Err(ComposeError::ZeroDegree);
        }
        let locus = branch_locus.into();
        let components = rep.presentation.component_labels();
        for label in &marked {
            if !components.contains(label) {
                return Err(ComposeError::MarkedNotInLocus {
                    component: label.clone(),
                    locus,
                });
            }
        }
        Ok(CoveringSide {
            rep,
            branch_locus: locus,
            marked,
            graph: graph.into(),
        })
    }

    pub fn degree(&self) -> usize {
        self.rep.degree
    }
}

/// A 3-manifold label realized as a covering in two ways; an element of the
/// morphism set between its two marked graphs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Correspondence {
    pub label: String,
    pub left: CoveringSide,
    pub right: CoveringSide,
}

impl Correspondence {
    pub fn source_graph(&self) -> &str {
        &self.left.graph
    }

    pub fn target_graph(&self) -> &str {
        &self.right.graph
    }

    pub fn left_degree(&self) -> usize {
        self.left.degree()
    }

    pub fn right_degree(&self) -> usize {
        self.right.degree()
    }

    /// Formal branch locus of the left covering map.
    pub fn left_locus(&self) -> LocusUnion {
        LocusUnion::atom(&self.left.branch_locus)
    }

    pub fn right_locus(&self) -> LocusUnion {
        LocusUnion::atom(&self.right.branch_locus)
    }
}

pub fn make_correspondence(
    label: impl Into<String>,
    left: CoveringSide,
    right: CoveringSide,
) -> Result<Correspondence, ComposeError> {
    Ok(Correspondence {
        label: label.into(),
        left,
        right,
    })
}

/// The trivial unbranched covering on a graph label: degree one on both
/// sides over the empty locus, the identity for composition.
pub fn unit(graph: &str) -> Correspondence {
    let rep = PermRep {
        degree: 1,
        images: Vec::new(),
        presentation: Presentation::empty(),
    };
    let side = CoveringSide {
        rep,
        branch_locus: "∅".to_string(),
        marked: BTreeSet::new(),
        graph: graph.to_string(),
    };
    Correspondence {
        label: format!("U_{graph}"),
        left: side.clone(),
        right: side,
    }
}

/// Transpose label convention: toggle a trailing `∨`, except for symmetric
/// correspondences which keep their label.
pub fn transpose_label(label: &str) -> String {
    match label.strip_suffix('∨') {
        Some(base) => base.to_string(),
        None => format!("{label}∨"),
    }
}

/// Swap the two covering sides. Involutive, including on labels.
pub fn transpose(c: &Correspondence) -> Correspondence {
    let label = if c.left == c.right {
        c.label.clone()
    } else {
        transpose_label(&c.label)
    };
    Correspondence {
        label,
        left: c.right.clone(),
        right: c.left.clone(),
    }
}

/// The presentation of the union of both middle branch loci on the shared
/// sphere, with each generator attributed to the sides its arc lies on.
/// Sides may overlap (shared arcs) but must jointly cover all generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MiddleDiagram {
    pub label: String,
    pub presentation: Presentation,
    /// 1-based generator indices of arcs on the first factor's locus.
    pub side1: BTreeSet<usize>,
    pub side2: BTreeSet<usize>,
}

/// Caller-supplied extensions of the two coupling representations over the
/// middle diagram.
#[derive(Debug, Clone)]
pub struct ComposeMaps {
    /// Extension of the left factor's right representation; identity on
    /// arcs only in side 2.
    pub left_extension: Vec<Perm>,
    /// Extension of the right factor's left representation; identity on
    /// arcs only in side 1.
    pub right_extension: Vec<Perm>,
}

/// One term of a formal union of branch loci: a base locus label pulled back
/// through a chain of correspondences.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct LocusAtom {
    pub via: Vec<String>,
    pub base: String,
}

/// A formal union of locus atoms; composition prepends transfer chains.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LocusUnion {
    pub atoms: BTreeSet<LocusAtom>,
}

impl LocusUnion {
    pub fn atom(base: &str) -> Self {
        let mut atoms = BTreeSet::new();
        atoms.insert(LocusAtom {
            via: Vec::new(),
            base: base.to_string(),
        });
        LocusUnion { atoms }
    }

    pub fn union(&self, other: &LocusUnion) -> LocusUnion {
        LocusUnion {
            atoms: self.atoms.union(&other.atoms).cloned().collect(),
        }
    }

    /// Pull every atom back through the given transfer chain.
    pub fn transferred(&self, chain: &[String]) -> LocusUnion {
        LocusUnion {
            atoms: self
                .atoms
                .iter()
                .map(|a| {
                    let mut via: Vec<String> = chain.to_vec();
                    via.extend(a.via.iter().cloned());
                    LocusAtom {
                        via,
                        base: a.base.clone(),
                    }
                })
                .collect(),
        }
    }

    pub fn render(&self) -> Vec<String> {
        self.atoms
            .iter()
            .map(|a| {
                let mut s = String::new();
                for v in &a.via {
                    s.push_str(&format!("π[{v}]"));
                }
                s.push_str(&a.base);
                s
            })
            .collect()
    }
}

/// One connected component of a fibered product, with its restricted middle
/// action and per-side outer degrees.
#[derive(Debug, Clone)]
pub struct CompositeComponent {
    pub label: String,
    /// The product action restricted to this orbit, renumbered along the
    /// sorted orbit.
    pub middle_rep: PermRep,
    /// Sheet pairs of the orbit, 1-indexed, sorted.
    pub orbit: Vec<(usize, usize)>,
    pub outer_left_degree: usize,
    pub outer_right_degree: usize,
    pub source_graph: String,
    pub target_graph: String,
}

/// A composed correspondence: orbit components plus bookkeeping. Outer
/// degrees are the products of the factors' outer degrees; per-component
/// values split them along orbits (exact when the coupling representations
/// are transitive).
#[derive(Debug, Clone)]
pub struct CompositeCorrespondence {
    pub label: String,
    pub components: Vec<CompositeComponent>,
    pub outer_left_degree: usize,
    pub outer_right_degree: usize,
    pub left_locus: LocusUnion,
    pub right_locus: LocusUnion,
    /// Transfer chains for locus pullbacks through this composite.
    pub left_chain: Vec<String>,
    pub right_chain: Vec<String>,
    pub source_graph: String,
    pub target_graph: String,
    /// Set when two cyclic coupling actions produced more than one
    /// component (non-coprime orders), which diverges from the single
    /// cyclic-cover composite of the coprime case.
    pub cyclic_divergence: bool,
}

pub fn outer_multiplicities(cc: &CompositeCorrespondence) -> (usize, usize) {
    (cc.outer_left_degree, cc.outer_right_degree)
}

/// Compose two correspondences over a caller-supplied middle diagram.
///
/// The engine validates the extensions (degrees, identity off-side,
/// relators), forms the product action on sheet pairs, and decomposes it
/// into orbits; each orbit is one component of the fibered product.
pub fn compose(
    c1: &Correspondence,
    c2: &Correspondence,
    mid: &MiddleDiagram,
    maps: &ComposeMaps,
) -> Result<CompositeCorrespondence, ComposeError> {
    if c1.target_graph() != c2.source_graph() {
        return Err(ComposeError::Composability {
            left: c1.target_graph().to_string(),
            right: c2.source_graph().to_string(),
        });
    }
    let m = c1.right_degree();
    let n_tilde = c2.left_degree();
    validate_extension(mid, &maps.left_extension, m, true)?;
    validate_extension(mid, &maps.right_extension, n_tilde, false)?;

    let left_rep =
        check_coloring(&mid.presentation, maps.left_extension.clone(), m).map_err(|source| {
            ComposeError::ExtensionInvalid {
                side: "left".to_string(),
                source,
            }
        })?;
    let right_rep = check_coloring(&mid.presentation, maps.right_extension.clone(), n_tilde)
        .map_err(|source| ComposeError::ExtensionInvalid {
            side: "right".to_string(),
            source,
        })?;

    let orbits = product_orbits(&left_rep.images, &right_rep.images, m, n_tilde);

    let n = c1.left_degree();
    let m_tilde = c2.right_degree();
    let mut components = Vec::new();
    for (k, orbit) in orbits.iter().enumerate() {
        let middle_rep = restrict_to_orbit(
            &mid.presentation,
            &left_rep.images,
            &right_rep.images,
            orbit,
        );
        let proj1: BTreeSet<usize> = orbit.iter().map(|&(i, _)| i).collect();
        let proj2: BTreeSet<usize> = orbit.iter().map(|&(_, j)| j).collect();
        components.push(CompositeComponent {
            label: format!("{}∘{}#{}", c1.label, c2.label, k + 1),
            middle_rep,
            orbit: orbit.clone(),
            outer_left_degree: n * orbit.len() / proj1.len(),
            outer_right_degree: m_tilde * orbit.len() / proj2.len(),
            source_graph: c1.source_graph().to_string(),
            target_graph: c2.target_graph().to_string(),
        });
    }

    let left_chain: Vec<String> = vec![c1.label.clone(), c2.label.clone()];
    let right_chain: Vec<String> = vec![transpose_label(&c2.label), transpose_label(&c1.label)];
    let left_locus = c1
        .left_locus()
        .union(&c2.left_locus().transferred(std::slice::from_ref(&c1.label)));
    let right_locus = c2
        .right_locus()
        .union(&c1.right_locus().transferred(&[transpose_label(&c2.label)]));

    let cyclic_divergence = orbits.len() > 1
        && is_cyclic_transitive(&left_rep.images, m)
        && is_cyclic_transitive(&right_rep.images, n_tilde);

    Ok(CompositeCorrespondence {
        label: format!("{}∘{}", c1.label, c2.label),
        components,
        outer_left_degree: n * n_tilde,
        outer_right_degree: m * m_tilde,
        left_locus,
        right_locus,
        left_chain,
        right_chain,
        source_graph: c1.source_graph().to_string(),
        target_graph: c2.target_graph().to_string(),
        cyclic_divergence,
    })
}

fn validate_extension(
    mid: &MiddleDiagram,
    images: &[Perm],
    degree: usize,
    is_left: bool,
) -> Result<(), ComposeError> {
    let side_name = if is_left { "left" } else { "right" };
    for g in 1..=mid.presentation.generator_count {
        if !mid.side1.contains(&g) && !mid.side2.contains(&g) {
            return Err(ComposeError::SidePartition(g));
        }
    }
    if images.len() != mid.presentation.generator_count {
        return Err(ComposeError::ExtensionDegree {
            side: side_name.to_string(),
            got: images.len(),
            expected: mid.presentation.generator_count,
        });
    }
    for img in images {
        if img.degree() != degree {
            return Err(ComposeError::ExtensionDegree {
                side: side_name.to_string(),
                got: img.degree(),
                expected: degree,
            });
        }
    }
    // the extension is trivial over arcs that belong only to the far side
    let (own, far) = if is_left {
        (&mid.side1, &mid.side2)
    } else {
        (&mid.side2, &mid.side1)
    };
    for &g in far {
        if !own.contains(&g) && !images[g - 1].is_identity() {
            return Err(ComposeError::ExtensionNotIdentity {
                side: side_name.to_string(),
                generator: g,
            });
        }
    }
    Ok(())
}

/// Orbits of the simultaneous action on `{1..m} x {1..n}`, sorted.
fn product_orbits(left: &[Perm], right: &[Perm], m: usize, n: usize) -> Vec<Vec<(usize, usize)>> {
    let index = |i: usize, j: usize| i * n + j;
    let mut uf = UnionFind::new(m * n);
    for (p, q) in left.iter().zip(right) {
        for i in 0..m {
            for j in 0..n {
                uf.union(index(i, j), index(p.apply(i), q.apply(j)));
            }
        }
    }
    let mut blocks: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for i in 0..m {
        for j in 0..n {
            let root = uf.find(index(i, j));
            blocks.entry(root).or_default().push((i + 1, j + 1));
        }
    }
    blocks.into_values().collect()
}

/// The product action restricted to one orbit, renumbered by sorted orbit
/// position, as a representation of the middle presentation.
fn restrict_to_orbit(
    presentation: &Presentation,
    left: &[Perm],
    right: &[Perm],
    orbit: &[(usize, usize)],
) -> PermRep {
    let position: BTreeMap<(usize, usize), usize> = orbit
        .iter()
        .enumerate()
        .map(|(pos, &pair)| (pair, pos))
        .collect();
    let images: Vec<Perm> = left
        .iter()
        .zip(right)
        .map(|(p, q)| {
            let map: Vec<usize> = orbit
                .iter()
                .map(|&(i, j)| position[&(p.apply_point(i), q.apply_point(j))])
                .collect();
            Perm::from_images(map).expect("orbit is closed under the product action")
        })
        .collect();
    PermRep {
        degree: orbit.len(),
        images,
        presentation: presentation.clone(),
    }
}

fn is_cyclic_transitive(images: &[Perm], degree: usize) -> bool {
    // a transitive cyclic action of degree n is generated by a single
    // n-cycle with all images powers of it
    let Some(generator) = images.iter().find(|p| p.cycle_type() == vec![degree]) else {
        return degree == 1;
    };
    let mut powers = Vec::with_capacity(degree);
    let mut acc = Perm::identity(degree);
    for _ in 0..degree {
        powers.push(acc.clone());
        acc = acc.then(generator);
    }
    images.iter().all(|img| powers.contains(img))
}

/// Bracketing comparison report for a composable chain of three
/// correspondences.
#[derive(Debug, Clone)]
pub struct AssociativityReport {
    pub pass: bool,
    pub left_outer_degrees: (usize, usize),
    pub right_outer_degrees: (usize, usize),
    pub left_component_count: usize,
    pub right_component_count: usize,
    pub left_component_sizes: Vec<usize>,
    pub right_component_sizes: Vec<usize>,
    pub left_left_locus: Vec<String>,
    pub right_left_locus: Vec<String>,
    pub left_right_locus: Vec<String>,
    pub right_right_locus: Vec<String>,
    pub mismatch: Option<String>,
}

/// Verify bracketing-independence of a chain `c1, c2, c3` with the two
/// middle diagrams and extensions supplied: outer-degree bookkeeping,
/// formal branch-locus unions, and the orbit decomposition of the iterated
/// sheet-set fibered product. Requires the middle factor's two sheet sets
/// to be identifiable (equal degrees).
#[allow(clippy::too_many_arguments)]
pub fn associativity_check(
    c1: &Correspondence,
    c2: &Correspondence,
    c3: &Correspondence,
    mid12: &MiddleDiagram,
    maps12: &ComposeMaps,
    mid23: &MiddleDiagram,
    maps23: &ComposeMaps,
) -> Result<AssociativityReport, ComposeError> {
    if c2.left_degree() != c2.right_degree() {
        return Err(ComposeError::SheetIdentification {
            left: c2.left_degree(),
            right: c2.right_degree(),
        });
    }
    let c12 = compose(c1, c2, mid12, maps12)?;
    let c23 = compose(c2, c3, mid23, maps23)?;

    // outer bookkeeping through each bracketing
    let left_outer = (
        c12.outer_left_degree * c3.left_degree(),
        c12.outer_right_degree * c3.right_degree(),
    );
    let right_outer = (
        c1.left_degree() * c23.outer_left_degree,
        c1.right_degree() * c23.outer_right_degree,
    );

    // locus unions through each bracketing
    let left_left_locus = c12
        .left_locus
        .union(&c3.left_locus().transferred(&c12.left_chain));
    let right_left_locus = c1
        .left_locus()
        .union(&c23.left_locus.transferred(std::slice::from_ref(&c1.label)));
    let left_right_locus = c3
        .right_locus()
        .union(&c12.right_locus.transferred(&[transpose_label(&c3.label)]));
    let right_right_locus = c23
        .right_locus
        .union(&c1.right_locus().transferred(&c23.right_chain));

    // iterated sheet-set fibered product on triples
    let m1 = c1.right_degree();
    let s2 = c2.left_degree();
    let n3 = c3.left_degree();
    let left_sizes = triple_orbit_sizes(
        &maps12.left_extension,
        &maps12.right_extension,
        &maps23.left_extension,
        &maps23.right_extension,
        m1,
        s2,
        n3,
        true,
    );
    let right_sizes = triple_orbit_sizes(
        &maps12.left_extension,
        &maps12.right_extension,
        &maps23.left_extension,
        &maps23.right_extension,
        m1,
        s2,
        n3,
        false,
    );

    let mut mismatch = None;
    if left_outer != right_outer {
        mismatch = Some(format!(
            "outer degrees differ: {left_outer:?} vs {right_outer:?}"
        ));
    } else if left_left_locus != right_left_locus {
        mismatch = Some(format!(
            "left branch loci differ: {:?} vs {:?}",
            left_left_locus.render(),
            right_left_locus.render()
        ));
    } else if left_right_locus != right_right_locus {
        mismatch = Some(format!(
            "right branch loci differ: {:?} vs {:?}",
            left_right_locus.render(),
            right_right_locus.render()
        ));
    } else if left_sizes != right_sizes {
        mismatch = Some(format!(
            "middle orbit sizes differ: {left_sizes:?} vs {right_sizes:?}"
        ));
    }

    Ok(AssociativityReport {
        pass: mismatch.is_none(),
        left_outer_degrees: left_outer,
        right_outer_degrees: right_outer,
        left_component_count: left_sizes.len(),
        right_component_count: right_sizes.len(),
        left_component_sizes: left_sizes,
        right_component_sizes: right_sizes,
        left_left_locus: left_left_locus.render(),
        right_left_locus: right_left_locus.render(),
        left_right_locus: left_right_locus.render(),
        right_right_locus: right_right_locus.render(),
        mismatch,
    })
}

/// Orbit sizes of the joint action on sheet triples, computed by first
/// coupling the pair named by `left_first` and then refining.
#[allow(clippy::too_many_arguments)]
fn triple_orbit_sizes(
    sigma1: &[Perm],
    sigma2: &[Perm],
    tau1: &[Perm],
    tau2: &[Perm],
    m1: usize,
    s2: usize,
    n3: usize,
    left_first: bool,
) -> Vec<usize> {
    let index = |i: usize, j: usize, k: usize| (i * s2 + j) * n3 + k;
    let mut uf = UnionFind::new(m1 * s2 * n3);
    let couple12 = |uf: &mut UnionFind| {
        for (p, q) in sigma1.iter().zip(sigma2) {
            for i in 0..m1 {
                for j in 0..s2 {
                    for k in 0..n3 {
                        uf.union(index(i, j, k), index(p.apply(i), q.apply(j), k));
                    }
                }
            }
        }
    };
    let couple23 = |uf: &mut UnionFind| {
        for (p, q) in tau1.iter().zip(tau2) {
            for i in 0..m1 {
                for j in 0..s2 {
                    for k in 0..n3 {
                        uf.union(index(i, j, k), index(i, p.apply(j), q.apply(k)));
                    }
                }
            }
        }
    };
    if left_first {
        couple12(&mut uf);
        couple23(&mut uf);
    } else {
        couple23(&mut uf);
        couple12(&mut uf);
    }
    let mut sizes: BTreeMap<usize, usize> = BTreeMap::new();
    for x in 0..m1 * s2 * n3 {
        *sizes.entry(uf.find(x)).or_default() += 1;
    }
    let mut out: Vec<usize> = sizes.into_values().collect();
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::explicit_presentation;

    pub(super) fn unknot_presentation() -> Presentation {
        explicit_presentation(1, vec![], vec!["c0".into()]).unwrap()
    }

    pub(super) fn cyclic_cover(label: &str, k: usize) -> Correspondence {
        let p = unknot_presentation();
        let cycle = Perm::from_cycles(k, &[(1..=k).collect()]).unwrap();
        let rep = check_coloring(&p, vec![cycle], k).unwrap();
        let side = CoveringSide::new(rep, "O", ["c0".to_string()].into(), "O").unwrap();
        make_correspondence(label, side.clone(), side).unwrap()
    }

    pub(super) fn unknot_middle() -> MiddleDiagram {
        MiddleDiagram {
            label: "O".into(),
            presentation: unknot_presentation(),
            side1: [1].into(),
            side2: [1].into(),
        }
    }

    pub(super) fn cyclic_maps(a: usize, b: usize) -> ComposeMaps {
        ComposeMaps {
            left_extension: vec![Perm::from_cycles(a, &[(1..=a).collect()]).unwrap()],
            right_extension: vec![Perm::from_cycles(b, &[(1..=b).collect()]).unwrap()],
        }
    }

    #[test]
    fn cyclic_coprime_composition_is_single_cyclic() {
        let m2 = cyclic_cover("M2", 2);
        let m3 = cyclic_cover("M3", 3);
        let cc = compose(&m2, &m3, &unknot_middle(), &cyclic_maps(2, 3)).unwrap();
        assert_eq!(cc.components.len(), 1);
        assert_eq!(cc.components[0].middle_rep.degree, 6);
        assert_eq!(cc.components[0].middle_rep.images[0].cycle_type(), vec![6]);
        assert_eq!(outer_multiplicities(&cc), (6, 6));
        assert_eq!(cc.components[0].outer_left_degree, 6);
        assert!(!cc.cyclic_divergence);
    }

    #[test]
    fn cyclic_non_coprime_splits_and_flags() {
        let m2 = cyclic_cover("M2", 2);
        let m2b = cyclic_cover("M2'", 2);
        let cc = compose(&m2, &m2b, &unknot_middle(), &cyclic_maps(2, 2)).unwrap();
        assert_eq!(cc.components.len(), 2);
        for comp in &cc.components {
            assert_eq!(comp.middle_rep.degree, 2);
            assert_eq!(comp.outer_left_degree, 2);
            assert_eq!(comp.outer_right_degree, 2);
        }
        assert!(cc.cyclic_divergence);
        assert_eq!(outer_multiplicities(&cc), (4, 4));
    }

    #[test]
    fn gcd_law_over_small_orders() {
        use num_integer::Integer;
        for a in 1..=6usize {
            for b in 1..=6usize {
                let ca = cyclic_cover("A", a);
                let cb = cyclic_cover("B", b);
                let cc = compose(&ca, &cb, &unknot_middle(), &cyclic_maps(a, b)).unwrap();
                let g = a.gcd(&b);
                let l = a.lcm(&b);
                assert_eq!(cc.components.len(), g, "gcd components for ({a},{b})");
                for comp in &cc.components {
                    assert_eq!(comp.middle_rep.degree, l);
                }
                let middle_total: usize = cc.components.iter().map(|c| c.middle_rep.degree).sum();
                assert_eq!(middle_total, a * b);
            }
        }
    }

    #[test]
    fn unit_laws() {
        let m5 = cyclic_cover("M5", 5);
        let u = unit("O");

        // M5 ∘ U: middle is M5's right locus, side2 empty
        let mid = MiddleDiagram {
            label: "O".into(),
            presentation: unknot_presentation(),
            side1: [1].into(),
            side2: BTreeSet::new(),
        };
        let maps = ComposeMaps {
            left_extension: m5.right.rep.images.clone(),
            right_extension: vec![Perm::identity(1)],
        };
        let cc = compose(&m5, &u, &mid, &maps).unwrap();
        assert_eq!(cc.components.len(), 1);
        assert_eq!(cc.components[0].middle_rep.images, m5.right.rep.images);
        assert_eq!(outer_multiplicities(&cc), (5, 5));

        // U ∘ M5
        let mid2 = MiddleDiagram {
            label: "O".into(),
            presentation: unknot_presentation(),
            side1: BTreeSet::new(),
            side2: [1].into(),
        };
        let maps2 = ComposeMaps {
            left_extension: vec![Perm::identity(1)],
            right_extension: m5.left.rep.images.clone(),
        };
        let cc2 = compose(&u, &m5, &mid2, &maps2).unwrap();
        assert_eq!(cc2.components.len(), 1);
        assert_eq!(cc2.components[0].middle_rep.images, m5.left.rep.images);

        // U ∘ U over the empty middle
        let mid3 = MiddleDiagram {
            label: "∅".into(),
            presentation: Presentation::empty(),
            side1: BTreeSet::new(),
            side2: BTreeSet::new(),
        };
        let maps3 = ComposeMaps {
            left_extension: vec![],
            right_extension: vec![],
        };
        let cc3 = compose(&u, &u, &mid3, &maps3).unwrap();
        assert_eq!(cc3.components.len(), 1);
        assert_eq!(outer_multiplicities(&cc3), (1, 1));
    }

    #[test]
    fn transpose_is_involutive() {
        let m2 = cyclic_cover("M2", 2);
        // symmetric sides: transpose keeps the label
        assert_eq!(transpose(&m2).label, "M2");
        assert_eq!(transpose(&transpose(&m2)), m2);
        assert_eq!(transpose(&unit("G")).label, "U_G");

        // asymmetric correspondence gets a marked label
        let p = unknot_presentation();
        let left = CoveringSide::new(
            check_coloring(&p, vec![Perm::from_cycles(3, &[vec![1, 2, 3]]).unwrap()], 3).unwrap(),
            "O",
            ["c0".to_string()].into(),
            "O",
        )
        .unwrap();
        let right = CoveringSide::new(
            check_coloring(&p, vec![Perm::from_cycles(2, &[vec![1, 2]]).unwrap()], 2).unwrap(),
            "O",
            ["c0".to_string()].into(),
            "O",
        )
        .unwrap();
        let c = make_correspondence("X", left, right).unwrap();
        let t = transpose(&c);
        assert_eq!(t.label, "X∨");
        assert_eq!(t.left_degree(), 2);
        assert_eq!(transpose(&t), c);
    }

    #[test]
    fn composability_and_extension_errors() {
        let m2 = cyclic_cover("M2", 2);
        let mut other = cyclic_cover("N", 3);
        other.left.graph = "K".into();
        let err = compose(&other, &m2, &unknot_middle(), &cyclic_maps(3, 2));
        assert!(
            err.is_ok(),
            "source graph of left side is not the coupling one"
        );

        let mut bad_target = cyclic_cover("N", 3);
        bad_target.right.graph = "K".into();
        let err = compose(&bad_target, &m2, &unknot_middle(), &cyclic_maps(3, 2)).unwrap_err();
        assert!(matches!(err, ComposeError::Composability { .. }));

        // extension with wrong degree
        let err = compose(&m2, &m2, &unknot_middle(), &cyclic_maps(3, 2)).unwrap_err();
        assert!(matches!(err, ComposeError::ExtensionDegree { .. }));

        // side partition not covering
        let mid = MiddleDiagram {
            label: "O".into(),
            presentation: unknot_presentation(),
            side1: BTreeSet::new(),
            side2: BTreeSet::new(),
        };
        let err = compose(&m2, &m2, &mid, &cyclic_maps(2, 2)).unwrap_err();
        assert!(matches!(err, ComposeError::SidePartition(1)));

        // extension must be identity on far-side-only arcs
        let trefoil = crate::presentation::wirtinger(
            &crate::presentation::parse_pd(crate::presentation::TREFOIL_PD, 0).unwrap(),
        );
        let mut side1: BTreeSet<usize> = (1..=6).collect();
        side1.remove(&6);
        let mid = MiddleDiagram {
            label: "K".into(),
            presentation: trefoil,
            side1,
            side2: [6].into(),
        };
        let t = Perm::parse("(1 2)", 2).unwrap();
        let maps = ComposeMaps {
            left_extension: vec![t.clone(); 6],
            right_extension: vec![t.clone(); 6],
        };
        let mut m2k = cyclic_cover("M2K", 2);
        m2k.right.graph = "K".into();
        let mut m2k2 = cyclic_cover("M2K2", 2);
        m2k2.left.graph = "K".into();
        let err = compose(&m2k, &m2k2, &mid, &maps).unwrap_err();
        assert!(matches!(err, ComposeError::ExtensionNotIdentity { .. }));
    }

    #[test]
    fn relator_failure_in_extension() {
        let trefoil = crate::presentation::wirtinger(
            &crate::presentation::parse_pd(crate::presentation::TREFOIL_PD, 0).unwrap(),
        );
        let mid = MiddleDiagram {
            label: "K".into(),
            presentation: trefoil,
            side1: (1..=6).collect(),
            side2: (1..=6).collect(),
        };
        let a = Perm::parse("(1 2)", 4).unwrap();
        let b = Perm::parse("(3 4)", 4).unwrap();
        let bad = vec![a.clone(), b.clone(), a.clone(), b.clone(), a, b];
        let mut c1 = cyclic_cover("C1", 4);
        c1.right.graph = "K".into();
        let mut c2 = cyclic_cover("C2", 4);
        c2.left.graph = "K".into();
        let maps = ComposeMaps {
            left_extension: bad.clone(),
            right_extension: vec![Perm::identity(4); 6],
        };
        let err = compose(&c1, &c2, &mid, &maps).unwrap_err();
        assert!(matches!(err, ComposeError::ExtensionInvalid { .. }));
    }

    #[test]
    fn associativity_cyclic_chain() {
        let (a, b, c) = (2usize, 3usize, 5usize);
        let ca = cyclic_cover("A", a);
        let cb = cyclic_cover("B", b);
        let cc3 = cyclic_cover("C", c);
        let report = associativity_check(
            &ca,
            &cb,
            &cc3,
            &unknot_middle(),
            &cyclic_maps(a, b),
            &unknot_middle(),
            &cyclic_maps(b, c),
        )
        .unwrap();
        assert!(report.pass, "{:?}", report.mismatch);
        assert_eq!(report.left_outer_degrees, (30, 30));
        assert_eq!(report.left_component_count, 1);
        assert_eq!(report.left_component_sizes, vec![30]);
    }

    #[test]
    fn associativity_with_units() {
        let m2 = cyclic_cover("M2", 2);
        let u = unit("O");
        let empty_mid = |side1: bool| MiddleDiagram {
            label: "O".into(),
            presentation: unknot_presentation(),
            side1: if side1 { [1].into() } else { BTreeSet::new() },
            side2: if side1 { BTreeSet::new() } else { [1].into() },
        };
        // M2 ∘ U ∘ M2
        let maps_mu = ComposeMaps {
            left_extension: m2.right.rep.images.clone(),
            right_extension: vec![Perm::identity(1)],
        };
        let maps_um = ComposeMaps {
            left_extension: vec![Perm::identity(1)],
            right_extension: m2.left.rep.images.clone(),
        };
        let report = associativity_check(
            &m2,
            &u,
            &m2,
            &empty_mid(true),
            &maps_mu,
            &empty_mid(false),
            &maps_um,
        )
        .unwrap();
        assert!(report.pass, "{:?}", report.mismatch);
        assert_eq!(report.left_outer_degrees, (4, 4));
    }

    #[test]
    fn sheet_identification_precondition() {
        let p = unknot_presentation();
        let left = CoveringSide::new(
            check_coloring(&p, vec![Perm::from_cycles(3, &[vec![1, 2, 3]]).unwrap()], 3).unwrap(),
            "O",
            ["c0".to_string()].into(),
            "O",
        )
        .unwrap();
        let right = CoveringSide::new(
            check_coloring(&p, vec![Perm::from_cycles(2, &[vec![1, 2]]).unwrap()], 2).unwrap(),
            "O",
            ["c0".to_string()].into(),
            "O",
        )
        .unwrap();
        let skew = make_correspondence("X", left, right).unwrap();
        let m2 = cyclic_cover("M2", 2);
        let m3 = cyclic_cover("M3", 3);
        let err = associativity_check(
            &m3,
            &skew,
            &m2,
            &unknot_middle(),
            &cyclic_maps(3, 3),
            &unknot_middle(),
            &cyclic_maps(2, 2),
        )
        .unwrap_err();
        assert!(matches!(err, ComposeError::SheetIdentification { .. }));
    }

    #[test]
    fn marked_subgraph_validation() {
        let p = unknot_presentation();
        let rep = check_coloring(&p, vec![Perm::identity(2)], 2).unwrap();
        let err = CoveringSide::new(rep, "O", ["missing".to_string()].into(), "G").unwrap_err();
        assert!(matches!(err, ComposeError::MarkedNotInLocus { .. }));
    }

    #[test]
    fn poincare_sphere_correspondence() {
        use crate::presentation::{parse_pd, wirtinger, TREFOIL_PD};
        // left: 5-fold transitive cover of the trefoil complement built
        // from the braid-relation pair, extended over all six arcs by the
        // overpass pattern {6,1}=A, {2,3}=B, {4,5}=ABA^{-1}
        let trefoil = wirtinger(&parse_pd(TREFOIL_PD, 0).unwrap());
        let a = Perm::parse("(1 2 3 4 5)", 5).unwrap();
        let b = Perm::parse("(1 3 5 4 2)", 5).unwrap();
        let c = a.then(&b).then(&a.inverse());
        let images = vec![a.clone(), b.clone(), b, c.clone(), c, a];
        let five_fold = check_coloring(&trefoil, images, 5).unwrap();
        assert!(crate::covering::orbits(&five_fold).is_transitive());
        let left = CoveringSide::new(five_fold, "K23", ["c0".to_string()].into(), "K23").unwrap();

        // right: 3-fold cyclic cover of the (2,5) torus knot complement
        let torus25 = wirtinger(
            &parse_pd(
                "X(1,6,2,7) X(3,8,4,9) X(5,10,6,1) X(7,2,8,3) X(9,4,10,5)",
                0,
            )
            .unwrap(),
        );
        assert_eq!(torus25.generator_count, 10);
        let cycle = Perm::parse("(1 2 3)", 3).unwrap();
        let three_fold = check_coloring(&torus25, vec![cycle; 10], 3).unwrap();
        assert!(crate::covering::orbits(&three_fold).is_transitive());
        let right = CoveringSide::new(three_fold, "K25", ["c0".to_string()].into(), "K25").unwrap();

        let poincare = make_correspondence("Poincare", left, right).unwrap();
        assert_eq!(poincare.source_graph(), "K23");
        assert_eq!(poincare.target_graph(), "K25");
        assert_eq!(poincare.left_degree(), 5);
        assert_eq!(poincare.right_degree(), 3);
    }

    #[test]
    fn transpose_of_composite_bookkeeping() {
        // transpose swaps outer degrees and formal loci at the bookkeeping level
        let m2 = cyclic_cover("M2", 2);
        let m3 = cyclic_cover("M3", 3);
        let cc = compose(&m2, &m3, &unknot_middle(), &cyclic_maps(2, 3)).unwrap();
        let cc_t = compose(&m3, &m2, &unknot_middle(), &cyclic_maps(3, 2)).unwrap();
        assert_eq!(
            (cc.outer_left_degree, cc.outer_right_degree),
            (cc_t.outer_right_degree, cc_t.outer_left_degree)
        );
        let lhs: Vec<String> = cc.left_locus.atoms.iter().map(|a| a.base.clone()).collect();
        let rhs: Vec<String> = cc_t
            .right_locus
            .atoms
            .iter()
            .map(|a| a.base.clone())
            .collect();
        assert_eq!(lhs, rhs);
    }
}
