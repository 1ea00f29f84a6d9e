//! Permutation representations of complement groups: a degree-n assignment
//! of permutations to generators that kills every relator encodes an n-fold
//! branched covering of the 3-sphere.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::perm::{all_perms, Perm};
use crate::presentation::{Presentation, UnionFind};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CoveringError {
    #[error("degree must be positive")]
    ZeroDegree,
    #[error("expected {expected} images, got {got}")]
    ImageCount { expected: usize, got: usize },
    #[error("image for generator {generator} has degree {got}, expected {expected}")]
    DegreeMismatch {
        generator: usize,
        got: usize,
        expected: usize,
    },
    #[error("relator {index} evaluates to {image} instead of the identity")]
    RelatorViolation { index: usize, image: String },
    #[error("unknown generator {0}")]
    UnknownGenerator(usize),
}

/// A verified permutation representation: all relators map to the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermRep {
    pub degree: usize,
    pub images: Vec<Perm>,
    pub presentation: Presentation,
}

/// Orbit partition of `{1..n}` under the image subgroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitDecomposition {
    /// Sorted blocks of 1-indexed points, sorted by minimum.
    pub blocks: Vec<Vec<usize>>,
}

impl OrbitDecomposition {
    pub fn is_transitive(&self) -> bool {
        self.blocks.len() == 1
    }
}

/// Evaluate a word of signed generator indices left-to-right.
pub fn eval_word(word: &[isize], images: &[Perm], degree: usize) -> Perm {
    let mut acc = Perm::identity(degree);
    for &letter in word {
        let idx = letter.unsigned_abs() - 1;
        if letter > 0 {
            acc = acc.then(&images[idx]);
        } else {
            acc = acc.then(&images[idx].inverse());
        }
    }
    acc
}

/// Check a candidate coloring of `p` in degree `n`. Left-to-right word
/// composition; every relator must evaluate to the identity.
pub fn check_coloring(
    p: &Presentation,
    images: Vec<Perm>,
    n: usize,
) -> Result<PermRep, CoveringError> {
    if n == 0 {
        return Err(CoveringError::ZeroDegree);
    }
    if images.len() != p.generator_count {
        return Err(CoveringError::ImageCount {
            expected: p.generator_count,
            got: images.len(),
        });
    }
    for (i, img) in images.iter().enumerate() {
        if img.degree() != n {
            return Err(CoveringError::DegreeMismatch {
                generator: i + 1,
                got: img.degree(),
                expected: n,
            });
        }
    }
    for (i, relator) in p.relators.iter().enumerate() {
        let value = eval_word(relator, &images, n);
        if !value.is_identity() {
            return Err(CoveringError::RelatorViolation {
                index: i + 1,
                image: value.to_string(),
            });
        }
    }
    Ok(PermRep {
        degree: n,
        images,
        presentation: p.clone(),
    })
}

/// Orbits of the image subgroup; a single block means the covering space is
/// connected.
pub fn orbits(rep: &PermRep) -> OrbitDecomposition {
    let mut uf = UnionFind::new(rep.degree);
    for img in &rep.images {
        for x in 0..rep.degree {
            uf.union(x, img.apply(x));
        }
    }
    let mut blocks_by_root: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for x in 0..rep.degree {
        let root = uf.find(x);
        blocks_by_root.entry(root).or_default().push(x + 1);
    }
    OrbitDecomposition {
        blocks: blocks_by_root.into_values().collect(),
    }
}

/// Cycle type of the meridian image of `generator` (1-based): one entry per
/// branch point over that arc, each entry the local branching index.
pub fn branching_indices(rep: &PermRep, generator: usize) -> Result<Vec<usize>, CoveringError> {
    if generator == 0 || generator > rep.images.len() {
        return Err(CoveringError::UnknownGenerator(generator));
    }
    Ok(rep.images[generator - 1].cycle_type())
}

/// Do two image tuples differ by a single simultaneous conjugation?
pub fn conjugate_reps(a: &[Perm], b: &[Perm]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let n = a.first().map_or(0, Perm::degree);
    all_perms(n)
        .iter()
        .any(|tau| a.iter().zip(b).all(|(x, y)| &x.relabel(tau) == y))
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SearchFilter {
    pub transitive: bool,
    pub nontrivial: bool,
    /// Reject colorings whose image subgroup is cyclic.
    pub non_cyclic: bool,
}

#[derive(Debug, Clone)]
pub struct ColoringClass {
    /// Canonical representative: the lexicographically least conjugate.
    pub images: Vec<Perm>,
    pub orbit_count: usize,
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub classes: Vec<ColoringClass>,
    /// True when the cap cut the enumeration short.
    pub truncated: bool,
}

/// Brute-force enumeration of valid colorings in degree `n`, modulo
/// simultaneous conjugation, with backtracking on relators whose generators
/// are all assigned. `cap` bounds the number of raw colorings collected.
pub fn search_colorings(
    p: &Presentation,
    n: usize,
    filter: &SearchFilter,
    cap: usize,
) -> SearchOutcome {
    let perms = all_perms(n);
    // relator -> largest generator appearing, to know when it is checkable
    let ready_at: Vec<usize> = p
        .relators
        .iter()
        .map(|r| r.iter().map(|l| l.unsigned_abs()).max().unwrap_or(0))
        .collect();

    let mut raw: Vec<Vec<Perm>> = Vec::new();
    let mut stack: Vec<Perm> = Vec::new();
    let mut truncated = false;
    dfs(
        p,
        n,
        &perms,
        &ready_at,
        cap,
        &mut stack,
        &mut raw,
        &mut truncated,
    );

    let mut classes: BTreeSet<Vec<Perm>> = BTreeSet::new();
    for images in raw {
        if filter.nontrivial && images.iter().all(Perm::is_identity) {
            continue;
        }
        let rep = PermRep {
            degree: n,
            images: images.clone(),
            presentation: p.clone(),
        };
        if filter.transitive && !orbits(&rep).is_transitive() {
            continue;
        }
        if filter.non_cyclic && image_group_is_cyclic(&images, n) {
            continue;
        }
        classes.insert(canonical_form(&images, n));
    }

    let classes = classes
        .into_iter()
        .map(|images| {
            let rep = PermRep {
                degree: n,
                images: images.clone(),
                presentation: p.clone(),
            };
            ColoringClass {
                orbit_count: orbits(&rep).blocks.len(),
                images,
            }
        })
        .collect();
    SearchOutcome { classes, truncated }
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    p: &Presentation,
    n: usize,
    perms: &[Perm],
    ready_at: &[usize],
    cap: usize,
    stack: &mut Vec<Perm>,
    raw: &mut Vec<Vec<Perm>>,
    truncated: &mut bool,
) {
    if *truncated {
        return;
    }
    if stack.len() == p.generator_count {
        if raw.len() == cap {
            *truncated = true;
            return;
        }
        raw.push(stack.clone());
        return;
    }
    for candidate in perms {
        stack.push(candidate.clone());
        let depth = stack.len();
        let ok = p
            .relators
            .iter()
            .zip(ready_at)
            .filter(|(_, &r)| r == depth)
            .all(|(relator, _)| eval_word(relator, stack, n).is_identity());
        if ok {
            dfs(p, n, perms, ready_at, cap, stack, raw, truncated);
        }
        stack.pop();
        if *truncated {
            return;
        }
    }
}

/// Lexicographically least simultaneous conjugate of the image tuple.
fn canonical_form(images: &[Perm], n: usize) -> Vec<Perm> {
    let mut best: Option<Vec<Perm>> = None;
    for tau in all_perms(n) {
        let candidate: Vec<Perm> = images.iter().map(|p| p.relabel(&tau)).collect();
        if best.as_ref().is_none_or(|b| &candidate < b) {
            best = Some(candidate);
        }
    }
    best.unwrap_or_default()
}

/// Closure of the generated subgroup, then test for a single generator of
/// full order.
fn image_group_is_cyclic(images: &[Perm], n: usize) -> bool {
    let mut group: BTreeSet<Perm> = BTreeSet::new();
    let mut frontier = vec![Perm::identity(n)];
    group.insert(Perm::identity(n));
    while let Some(g) = frontier.pop() {
        for img in images {
            let next = g.then(img);
            if group.insert(next.clone()) {
                frontier.push(next);
            }
        }
    }
    let order = group.len();
    group.iter().any(|g| element_order(g) == order)
}

fn element_order(p: &Perm) -> usize {
    let mut acc = p.clone();
    let mut k = 1;
    while !acc.is_identity() {
        acc = acc.then(p);
        k += 1;
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::{explicit_presentation, parse_pd, wirtinger, TREFOIL_PD};

    fn trefoil() -> Presentation {
        wirtinger(&parse_pd(TREFOIL_PD, 0).unwrap())
    }

    /// Applies a relator to every point letter by letter, bypassing
    /// `Perm::then`, as an independent acceptance oracle.
    fn relators_hold_pointwise(p: &Presentation, images: &[Perm], n: usize) -> bool {
        p.relators.iter().all(|relator| {
            (1..=n).all(|start| {
                let mut x = start;
                for &letter in relator {
                    let img = &images[letter.unsigned_abs() - 1];
                    x = if letter > 0 {
                        img.apply_point(x)
                    } else {
                        img.inverse().apply_point(x)
                    };
                }
                x == start
            })
        })
    }

    #[test]
    fn all_equal_transposition_is_valid() {
        let p = trefoil();
        let t = Perm::parse("(1 2)", 2).unwrap();
        let images = vec![t; 6];
        assert!(relators_hold_pointwise(&p, &images, 2));
        let rep = check_coloring(&p, images, 2).unwrap();
        assert_eq!(rep.degree, 2);
    }

    /// The trefoil arcs pair into overpasses {4,5}, {6,1}, {2,3}; coloring
    /// overpasses with the three transpositions of S3 is the tricoloring.
    fn tricoloring() -> Vec<Perm> {
        let x = Perm::parse("(1 3)", 3).unwrap(); // overpass {6,1}
        let y = Perm::parse("(2 3)", 3).unwrap(); // overpass {2,3}
        let z = Perm::parse("(1 2)", 3).unwrap(); // overpass {4,5}
        vec![x.clone(), y.clone(), y, z.clone(), z, x]
    }

    #[test]
    fn tricoloring_is_valid_and_transitive() {
        let p = trefoil();
        let images = tricoloring();
        assert!(relators_hold_pointwise(&p, &images, 3));
        let rep = check_coloring(&p, images, 3).unwrap();
        let orb = orbits(&rep);
        assert_eq!(orb.blocks, vec![vec![1, 2, 3]]);
    }

    #[test]
    fn inconsistent_coloring_rejected() {
        let p = trefoil();
        let a = Perm::parse("(1 2)", 4).unwrap();
        let b = Perm::parse("(3 4)", 4).unwrap();
        let images = vec![
            a.clone(),
            b.clone(),
            a.clone(),
            b.clone(),
            a.clone(),
            b.clone(),
        ];
        assert!(!relators_hold_pointwise(&p, &images, 4));
        let err = check_coloring(&p, images, 4).unwrap_err();
        assert!(matches!(err, CoveringError::RelatorViolation { .. }));
    }

    #[test]
    fn degree_zero_rejected() {
        let p = explicit_presentation(0, vec![], vec![]).unwrap();
        assert_eq!(
            check_coloring(&p, vec![], 0),
            Err(CoveringError::ZeroDegree)
        );
        assert!(check_coloring(&p, vec![], 1).is_ok());
    }

    #[test]
    fn orbit_examples() {
        let unknot = explicit_presentation(1, vec![], vec!["c0".into()]).unwrap();
        let five =
            check_coloring(&unknot, vec![Perm::parse("(1 2 3 4 5)", 5).unwrap()], 5).unwrap();
        assert_eq!(orbits(&five).blocks, vec![vec![1, 2, 3, 4, 5]]);

        let trivial = check_coloring(&unknot, vec![Perm::identity(3)], 3).unwrap();
        assert_eq!(orbits(&trivial).blocks.len(), 3);
    }

    #[test]
    fn orbit_blocks_are_invariant_and_partition() {
        let p = trefoil();
        let rep = check_coloring(&p, tricoloring(), 3).unwrap();
        let orb = orbits(&rep);
        let total: usize = orb.blocks.iter().map(Vec::len).sum();
        assert_eq!(total, rep.degree);
        for block in &orb.blocks {
            for img in &rep.images {
                for &x in block {
                    assert!(block.contains(&img.apply_point(x)));
                }
            }
        }
    }

    #[test]
    fn branching_examples() {
        let unknot = explicit_presentation(1, vec![], vec!["c0".into()]).unwrap();
        let five =
            check_coloring(&unknot, vec![Perm::parse("(1 2 3 4 5)", 5).unwrap()], 5).unwrap();
        assert_eq!(branching_indices(&five, 1).unwrap(), vec![5]);

        let rep = check_coloring(&trefoil(), tricoloring(), 3).unwrap();
        for arc in 1..=6 {
            assert_eq!(branching_indices(&rep, arc).unwrap(), vec![2, 1]);
        }

        let degree_one = check_coloring(&unknot, vec![Perm::identity(1)], 1).unwrap();
        assert_eq!(branching_indices(&degree_one, 1).unwrap(), vec![1]);

        assert_eq!(
            branching_indices(&rep, 7),
            Err(CoveringError::UnknownGenerator(7))
        );
    }

    #[test]
    fn search_unknot_transitive_degree3() {
        let unknot = explicit_presentation(1, vec![], vec!["c0".into()]).unwrap();
        let out = search_colorings(
            &unknot,
            3,
            &SearchFilter {
                transitive: true,
                ..Default::default()
            },
            10_000,
        );
        // the two 3-cycles are conjugate: one class
        assert_eq!(out.classes.len(), 1);
        assert!(!out.truncated);
        assert_eq!(out.classes[0].orbit_count, 1);
    }

    #[test]
    fn search_trefoil_group_degree2() {
        // the two-generator trefoil group presentation
        let p = explicit_presentation(
            2,
            vec![vec![1, 2, 1, -2, -1, -2]],
            vec!["c0".into(), "c0".into()],
        )
        .unwrap();
        let out = search_colorings(
            &p,
            2,
            &SearchFilter {
                transitive: true,
                nontrivial: true,
                non_cyclic: false,
            },
            10_000,
        );
        // abelianization mod 2 forces both meridians onto the transposition
        assert_eq!(out.classes.len(), 1);
        let class = &out.classes[0];
        assert!(class
            .images
            .iter()
            .all(|p| p == &Perm::parse("(1 2)", 2).unwrap()));
    }

    #[test]
    fn search_roundtrip_revalidates() {
        let p = trefoil();
        let out = search_colorings(
            &p,
            3,
            &SearchFilter {
                transitive: true,
                nontrivial: true,
                non_cyclic: false,
            },
            100_000,
        );
        assert!(!out.classes.is_empty());
        for class in &out.classes {
            assert!(check_coloring(&p, class.images.clone(), 3).is_ok());
        }
    }

    #[test]
    fn search_caps_report_truncation() {
        let unknot = explicit_presentation(1, vec![], vec!["c0".into()]).unwrap();
        let out = search_colorings(&unknot, 4, &SearchFilter::default(), 3);
        assert!(out.truncated);
        assert!(out.classes.len() <= 3);
    }

    #[test]
    fn conjugacy_predicate() {
        let a = vec![Perm::parse("(1 2 3)", 3).unwrap()];
        let b = vec![Perm::parse("(1 3 2)", 3).unwrap()];
        assert!(conjugate_reps(&a, &b));
        let c = vec![Perm::identity(3)];
        assert!(!conjugate_reps(&a, &c));
    }

    #[test]
    fn coloring_count_invariant_under_diagram_symmetry() {
        // the trefoil PD is preserved by the arc relabeling i -> i+2 (mod 6)
        let p = trefoil();
        let shift = |i: usize| (i + 2 - 1) % 6 + 1;
        let perms = all_perms(2);
        let mut valid = 0;
        let mut valid_shifted = 0;
        for a in 0..perms.len().pow(6) {
            // enumerate S_2^6 through base-2 digits of a 6-digit index
            let mut digits = Vec::new();
            let mut acc = a;
            for _ in 0..6 {
                digits.push(acc % 2);
                acc /= 2;
            }
            let images: Vec<Perm> = digits.iter().map(|&d| perms[d].clone()).collect();
            let shifted: Vec<Perm> = (1..=6).map(|i| images[shift(i) - 1].clone()).collect();
            if check_coloring(&p, images, 2).is_ok() {
                valid += 1;
            }
            if check_coloring(&p, shifted, 2).is_ok() {
                valid_shifted += 1;
            }
        }
        assert_eq!(valid, valid_shifted);
        assert!(valid > 0);
    }
}
