//! Link diagrams in PD notation and finitely presented groups of their
//! complements.
//!
//! Arcs are the edges of the diagram (each crossing cuts both strands), so a
//! diagram with `c` crossings on a knot has `2c` arcs. The Wirtinger
//! construction emits one generator per arc and one conjugation relator per
//! crossing. Embedded graphs beyond links enter through
//! [`explicit_presentation`].

use std::collections::BTreeMap;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PresentationError {
    #[error("malformed PD token: {0}")]
    MalformedToken(String),
    #[error("arc {arc} appears {count} times, expected exactly 2")]
    ArcIncidenceCount { arc: usize, count: usize },
    #[error("arc index {arc} out of range 1..{max}")]
    ArcOutOfRange { arc: usize, max: usize },
    #[error("inconsistent arc incidence at crossing {0}")]
    InconsistentIncidence(usize),
    #[error("generator index {index} out of range 1..{max}")]
    GeneratorOutOfRange { index: isize, max: usize },
    #[error("component label list has {got} entries, expected {expected}")]
    ComponentCount { got: usize, expected: usize },
}

/// A link diagram given by PD crossings `X(a,b,c,d)`: `a` is the incoming
/// under-strand arc, then `b,c,d` counterclockwise, so `c` is the outgoing
/// under-strand and `b,d` carry the over-strand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagram {
    pub crossings: Vec<[usize; 4]>,
    pub arc_count: usize,
    /// Component label per arc, indexed by `arc - 1`.
    pub component_of_arc: Vec<String>,
}

/// A finitely presented group: relators are freely reduced words of signed
/// 1-based generator indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub generator_count: usize,
    pub relators: Vec<Vec<isize>>,
    /// Component label per generator, indexed by `generator - 1`.
    pub component_of_generator: Vec<String>,
}

impl Presentation {
    /// The empty presentation (trivial group, empty branch locus).
    pub fn empty() -> Self {
        Presentation {
            generator_count: 0,
            relators: Vec::new(),
            component_of_generator: Vec::new(),
        }
    }

    pub fn component_labels(&self) -> Vec<String> {
        let mut labels: Vec<String> = self.component_of_generator.clone();
        labels.sort();
        labels.dedup();
        labels
    }
}

/// Cancel adjacent `x x^{-1}` pairs until the word is freely reduced.
pub fn free_reduce(word: &[isize]) -> Vec<isize> {
    let mut out: Vec<isize> = Vec::with_capacity(word.len());
    for &letter in word {
        if let Some(&top) = out.last() {
            if top == -letter {
                out.pop();
                continue;
            }
        }
        out.push(letter);
    }
    out
}

/// Parse PD text, a whitespace-separated sequence of `X(a,b,c,d)` tokens.
/// `crossingless_components` appends that many extra closed arcs with no
/// crossings (unknotted split components).
pub fn parse_pd(text: &str, crossingless_components: usize) -> Result<Diagram, PresentationError> {
    let mut crossings = Vec::new();
    for token in text.split_whitespace() {
        let inner = token
            .strip_prefix("X(")
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| PresentationError::MalformedToken(token.to_string()))?;
        let parts: Result<Vec<usize>, _> = inner.split(',').map(|s| s.trim().parse()).collect();
        let parts = parts.map_err(|_| PresentationError::MalformedToken(token.to_string()))?;
        if parts.len() != 4 {
            return Err(PresentationError::MalformedToken(token.to_string()));
        }
        crossings.push([parts[0], parts[1], parts[2], parts[3]]);
    }

    let crossing_arcs = 2 * crossings.len();
    let arc_count = crossing_arcs + crossingless_components;

    let mut counts = vec![0usize; crossing_arcs];
    for (ci, x) in crossings.iter().enumerate() {
        let mut at_crossing = Vec::new();
        for &arc in x {
            if arc == 0 || arc > crossing_arcs {
                return Err(PresentationError::ArcOutOfRange {
                    arc,
                    max: crossing_arcs,
                });
            }
            if at_crossing.contains(&arc) {
                return Err(PresentationError::InconsistentIncidence(ci + 1));
            }
            at_crossing.push(arc);
            counts[arc - 1] += 1;
        }
    }
    for (i, &count) in counts.iter().enumerate() {
        if count != 2 {
            return Err(PresentationError::ArcIncidenceCount { arc: i + 1, count });
        }
    }

    // Components: arcs joined through a crossing, under-in with under-out
    // and the two over slots with each other.
    let mut uf = UnionFind::new(arc_count);
    for x in &crossings {
        uf.union(x[0] - 1, x[2] - 1);
        uf.union(x[1] - 1, x[3] - 1);
    }
    let mut label_of_root: BTreeMap<usize, String> = BTreeMap::new();
    let mut component_of_arc = vec![String::new(); arc_count];
    for arc in 0..arc_count {
        let root = uf.find(arc);
        let next = label_of_root.len();
        let label = label_of_root
            .entry(root)
            .or_insert_with(|| format!("c{next}"));
        component_of_arc[arc] = label.clone();
    }

    Ok(Diagram {
        crossings,
        arc_count,
        component_of_arc,
    })
}

/// Wirtinger presentation of the diagram complement: one generator per arc,
/// one relator per crossing stating that the outgoing under-arc is the
/// incoming one conjugated by the over-strand.
pub fn wirtinger(d: &Diagram) -> Presentation {
    let mut relators = Vec::with_capacity(d.crossings.len());
    for x in &d.crossings {
        let (under_in, over, under_out) = (x[0] as isize, x[1] as isize, x[2] as isize);
        relators.push(free_reduce(&[over, under_in, -over, -under_out]));
    }
    Presentation {
        generator_count: d.arc_count,
        relators,
        component_of_generator: d.component_of_arc.clone(),
    }
}

/// A user-supplied presentation, e.g. for the complement of an embedded
/// spatial graph. Words are freely reduced; indices validated.
pub fn explicit_presentation(
    generators: usize,
    relators: Vec<Vec<isize>>,
    components: Vec<String>,
) -> Result<Presentation, PresentationError> {
    if components.len() != generators {
        return Err(PresentationError::ComponentCount {
            got: components.len(),
            expected: generators,
        });
    }
    let mut reduced = Vec::with_capacity(relators.len());
    for word in relators {
        for &letter in &word {
            let idx = letter.unsigned_abs();
            if letter == 0 || idx > generators {
                return Err(PresentationError::GeneratorOutOfRange {
                    index: letter,
                    max: generators,
                });
            }
        }
        reduced.push(free_reduce(&word));
    }
    Ok(Presentation {
        generator_count: generators,
        relators: reduced,
        component_of_generator: components,
    })
}

/// Minimal union-find used for orbit and component computations.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // smaller root wins, keeps representatives deterministic
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// Standard 3-crossing trefoil PD code, used throughout the tests.
pub const TREFOIL_PD: &str = "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)";
