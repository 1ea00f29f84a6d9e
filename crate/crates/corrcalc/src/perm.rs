//! Permutations of `{1..n}`, 1-indexed in all textual forms, composed
//! left-to-right (word order = path order).

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PermError {
    #[error("image list is not a permutation of 1..{0}")]
    NotBijective(usize),
    #[error("cycle entry {entry} out of range 1..{degree}")]
    EntryOutOfRange { entry: usize, degree: usize },
    #[error("cycle entry {0} repeated")]
    RepeatedEntry(usize),
    #[error("malformed cycle notation: {0}")]
    Malformed(String),
}

/// A permutation of `{1..n}`. Internally 0-indexed images.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    map: Vec<usize>,
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm {
            map: (0..n).collect(),
        }
    }

    /// Build from 0-indexed images; must be a bijection.
    pub fn from_images(map: Vec<usize>) -> Result<Self, PermError> {
        let n = map.len();
        let mut seen = vec![false; n];
        for &v in &map {
            if v >= n || seen[v] {
                return Err(PermError::NotBijective(n));
            }
            seen[v] = true;
        }
        Ok(Perm { map })
    }

    /// Build from disjoint cycles in 1-indexed notation.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self, PermError> {
        let mut map: Vec<usize> = (0..n).collect();
        let mut seen = vec![false; n];
        for cycle in cycles {
            for i in 0..cycle.len() {
                let a = cycle[i];
                if a == 0 || a > n {
                    return Err(PermError::EntryOutOfRange {
                        entry: a,
                        degree: n,
                    });
                }
                if seen[a - 1] {
                    return Err(PermError::RepeatedEntry(a));
                }
                seen[a - 1] = true;
                let b = cycle[(i + 1) % cycle.len()];
                if b == 0 || b > n {
                    return Err(PermError::EntryOutOfRange {
                        entry: b,
                        degree: n,
                    });
                }
                map[a - 1] = b - 1;
            }
        }
        Ok(Perm { map })
    }

    /// Parse cycle notation like `(1 2)(3 4)` or `(1 2) (3 4)`. Fixed points
    /// omitted; `""`, `"()"` and `"id"` all denote the identity.
    pub fn parse(text: &str, n: usize) -> Result<Self, PermError> {
        let trimmed = text.trim();
        if trimmed.is_empty() || trimmed == "()" || trimmed == "id" {
            return Ok(Perm::identity(n));
        }
        let mut cycles = Vec::new();
        let mut rest = trimmed;
        while !rest.is_empty() {
            rest = rest.trim_start();
            if rest.is_empty() {
                break;
            }
            if !rest.starts_with('(') {
                return Err(PermError::Malformed(text.to_string()));
            }
            let close = rest
                .find(')')
                .ok_or_else(|| PermError::Malformed(text.to_string()))?;
            let body = &rest[1..close];
            let entries: Result<Vec<usize>, _> = body
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<usize>())
                .collect();
            let entries = entries.map_err(|_| PermError::Malformed(text.to_string()))?;
            if !entries.is_empty() {
                cycles.push(entries);
            }
            rest = &rest[close + 1..];
        }
        Perm::from_cycles(n, &cycles)
    }

    pub fn degree(&self) -> usize {
        self.map.len()
    }

    /// 0-indexed application.
    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// 1-indexed application.
    pub fn apply_point(&self, x: usize) -> usize {
        self.map[x - 1] + 1
    }

    /// `self` then `other` (left-to-right composition).
    pub fn then(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm {
            map: self.map.iter().map(|&v| other.map[v]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut map = vec![0; self.map.len()];
        for (i, &v) in self.map.iter().enumerate() {
            map[v] = i;
        }
        Perm { map }
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// Relabel points by `tau`: the result sends `tau(x)` to `tau(self(x))`.
    pub fn relabel(&self, tau: &Perm) -> Perm {
        let mut map = vec![0; self.map.len()];
        for x in 0..self.map.len() {
            map[tau.map[x]] = tau.map[self.map[x]];
        }
        Perm { map }
    }

    /// Nontrivial cycles, 1-indexed, each rotated to start at its minimum,
    /// sorted by that minimum.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.map.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.map[start] == start {
                seen[start] = true;
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x + 1);
                x = self.map[x];
            }
            out.push(cycle);
        }
        out
    }

    /// Cycle type including fixed points, sorted descending.
    pub fn cycle_type(&self) -> Vec<usize> {
        let n = self.map.len();
        let mut seen = vec![false; n];
        let mut lengths = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                len += 1;
                x = self.map[x];
            }
            lengths.push(len);
        }
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        lengths
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for cycle in cycles {
            write!(f, "(")?;
            for (i, v) in cycle.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{v}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// All permutations of degree `n` in a deterministic order.
pub fn all_perms(n: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    permute(&mut current, 0, &mut out);
    out.sort();
    out
}

fn permute(current: &mut Vec<usize>, k: usize, out: &mut Vec<Perm>) {
    if k == current.len() {
        out.push(Perm {
            map: current.clone(),
        });
        return;
    }
    for i in k..current.len() {
        current.swap(k, i);
        permute(current, k + 1, out);
        current.swap(k, i);
    }
    if current.is_empty() {
        out.push(Perm { map: vec![] });
    }
}
