//! JSON interchange formats: presentations, colorings, composition tables,
//! algebra elements, composition requests, sessions, declarations, cell
//! tables, and multiplicity oracles.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraElement, AlgebraError, CompositionTable, LabelInfo};
use crate::cobordism::{BoundaryInvariants, CellTable, TwoCell};
use crate::covering::{check_coloring, CoveringError, PermRep};
use crate::perm::{Perm, PermError};
use crate::presentation::{explicit_presentation, Presentation, PresentationError};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("generator key {0} is not of the form g<index>")]
    BadGeneratorKey(String),
    #[error("missing image for generator g{0}")]
    MissingImage(usize),
    #[error("compose key {0} is not of the form left|right")]
    BadComposeKey(String),
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Covering(#[from] CoveringError),
    #[error(transparent)]
    Table(#[from] AlgebraError),
}

/// Round to 12 significant digits for byte-deterministic reports.
pub fn round_sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

fn generator_key(index: usize) -> String {
    format!("g{index}")
}

fn parse_generator_key(key: &str) -> Result<usize, IoError> {
    key.strip_prefix('g')
        .and_then(|rest| rest.parse::<usize>().ok())
        .filter(|&i| i >= 1)
        .ok_or_else(|| IoError::BadGeneratorKey(key.to_string()))
}

/// `{"generators": k, "relators": [[1,-2,...]], "components": {"g1": "c0"}}`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PresentationDto {
    pub generators: usize,
    pub relators: Vec<Vec<isize>>,
    #[serde(default)]
    pub components: BTreeMap<String, String>,
}

impl PresentationDto {
    pub fn to_presentation(&self) -> Result<Presentation, IoError> {
        let mut components = vec![String::from("c0"); self.generators];
        for (key, label) in &self.components {
            let index = parse_generator_key(key)?;
            if index > self.generators {
                return Err(IoError::BadGeneratorKey(key.clone()));
            }
            components[index - 1] = label.clone();
        }
        Ok(explicit_presentation(
            self.generators,
            self.relators.clone(),
            components,
        )?)
    }

    pub fn from_presentation(p: &Presentation) -> Self {
        PresentationDto {
            generators: p.generator_count,
            relators: p.relators.clone(),
            components: p
                .component_of_generator
                .iter()
                .enumerate()
                .map(|(i, label)| (generator_key(i + 1), label.clone()))
                .collect(),
        }
    }
}

/// `{"degree": n, "images": {"g1": "(1 2)(3 4)", ...}}`; fixed points
/// omitted in the cycle notation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ColoringDto {
    pub degree: usize,
    #[serde(default)]
    pub images: BTreeMap<String, String>,
}

impl ColoringDto {
    pub fn to_images(&self, generator_count: usize) -> Result<Vec<Perm>, IoError> {
        let mut images: Vec<Option<Perm>> = vec![None; generator_count];
        for (key, text) in &self.images {
            let index = parse_generator_key(key)?;
            if index > generator_count {
                return Err(IoError::BadGeneratorKey(key.clone()));
            }
            images[index - 1] = Some(Perm::parse(text, self.degree)?);
        }
        images
            .into_iter()
            .enumerate()
            .map(|(i, img)| img.ok_or(IoError::MissingImage(i + 1)))
            .collect()
    }

    pub fn to_rep(&self, presentation: &Presentation) -> Result<PermRep, IoError> {
        let images = self.to_images(presentation.generator_count)?;
        Ok(check_coloring(presentation, images, self.degree)?)
    }

    pub fn from_rep(rep: &PermRep) -> Self {
        ColoringDto {
            degree: rep.degree,
            images: rep
                .images
                .iter()
                .enumerate()
                .map(|(i, p)| (generator_key(i + 1), p.to_string()))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LabelDto {
    pub n: usize,
    pub m: usize,
    pub source: String,
    pub target: String,
    pub transpose: String,
}

/// `{"labels": {...}, "compose": {"M1|M2": ["C1", ...]}}`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TableDto {
    pub labels: BTreeMap<String, LabelDto>,
    #[serde(default)]
    pub compose: BTreeMap<String, Vec<String>>,
}

impl TableDto {
    pub fn to_table(&self) -> Result<CompositionTable, IoError> {
        self.build(false)
    }

    /// Class-level tables may carry repeated components and collapsed
    /// degree sums.
    pub fn to_table_relaxed(&self) -> Result<CompositionTable, IoError> {
        self.build(true)
    }

    fn build(&self, relaxed: bool) -> Result<CompositionTable, IoError> {
        let labels: BTreeMap<String, LabelInfo> = self
            .labels
            .iter()
            .map(|(label, dto)| {
                (
                    label.clone(),
                    LabelInfo {
                        n: dto.n,
                        m: dto.m,
                        source: dto.source.clone(),
                        target: dto.target.clone(),
                        transpose: dto.transpose.clone(),
                    },
                )
            })
            .collect();
        let mut entries = BTreeMap::new();
        for (key, components) in &self.compose {
            let (a, b) = key
                .split_once('|')
                .ok_or_else(|| IoError::BadComposeKey(key.clone()))?;
            entries.insert((a.to_string(), b.to_string()), components.clone());
        }
        Ok(if relaxed {
            CompositionTable::new_relaxed(labels, entries)?
        } else {
            CompositionTable::new(labels, entries)?
        })
    }

    pub fn from_table(table: &CompositionTable) -> Self {
        TableDto {
            labels: table
                .labels()
                .iter()
                .map(|(label, info)| {
                    (
                        label.clone(),
                        LabelDto {
                            n: info.n,
                            m: info.m,
                            source: info.source.clone(),
                            target: info.target.clone(),
                            transpose: info.transpose.clone(),
                        },
                    )
                })
                .collect(),
            compose: table
                .entries()
                .iter()
                .map(|((a, b), components)| (format!("{a}|{b}"), components.clone()))
                .collect(),
        }
    }
}

/// `{"coefficients": {"M2": [re, im], ...}}`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ElementDto {
    pub coefficients: BTreeMap<String, [f64; 2]>,
}

impl ElementDto {
    pub fn to_element(&self) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (label, [re, im]) in &self.coefficients {
            out.add_term(label, num_complex::Complex64::new(*re, *im));
        }
        out
    }

    pub fn from_element(e: &AlgebraElement) -> Self {
        ElementDto {
            coefficients: e
                .coeffs
                .iter()
                .map(|(label, z)| (label.clone(), [round_sig12(z.re), round_sig12(z.im)]))
                .collect(),
        }
    }
}

/// One side of a correspondence: a coloring of a named presentation over a
/// named branch locus.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SideDto {
    pub presentation: String,
    pub degree: usize,
    #[serde(default)]
    pub images: BTreeMap<String, String>,
    pub locus: String,
    #[serde(default)]
    pub marked: Vec<String>,
    pub graph: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorrespondenceDto {
    pub left: SideDto,
    pub right: SideDto,
}

/// A session file: named presentations and diagrams, labeled
/// correspondences, and unit labels per graph.
#[derive(Debug, Clone, Serialize, Deserialize, Default)]
pub struct SessionDto {
    #[serde(default)]
    pub presentations: BTreeMap<String, PresentationDto>,
    /// PD text per diagram name; converted through the Wirtinger
    /// construction when referenced.
    #[serde(default)]
    pub diagrams: BTreeMap<String, String>,
    #[serde(default)]
    pub correspondences: BTreeMap<String, CorrespondenceDto>,
    /// Unit correspondences to register, keyed by label with the graph as
    /// value.
    #[serde(default)]
    pub units: BTreeMap<String, String>,
}

/// `{"left": label, "right": label, "middle": presentation ref, ...}`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RequestDto {
    pub left: String,
    pub right: String,
    pub middle: String,
    #[serde(default)]
    pub side1_arcs: Vec<usize>,
    #[serde(default)]
    pub side2_arcs: Vec<usize>,
    pub left_extension: ColoringDto,
    pub right_extension: ColoringDto,
}

/// `{"equiv": [[a, b], ...]}`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DeclarationDto {
    pub equiv: Vec<[String; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CellDto {
    pub src: String,
    pub tgt: String,
    pub deg: usize,
    #[serde(default)]
    pub inv: BTreeMap<String, f64>,
}

/// `{"cells": {...}, "vertical": {"W1|W2": "W"}, "horizontal": {...}}` with
/// optional dagger pairing and boundary invariant values.
#[derive(Debug, Clone, Serialize, Deserialize, Default)]
pub struct CellTableDto {
    #[serde(default)]
    pub cells: BTreeMap<String, CellDto>,
    #[serde(default)]
    pub vertical: BTreeMap<String, String>,
    #[serde(default)]
    pub horizontal: BTreeMap<String, String>,
    #[serde(default)]
    pub dagger: BTreeMap<String, String>,
    /// invariant name -> correspondence label -> value
    #[serde(default)]
    pub boundary: BTreeMap<String, BTreeMap<String, f64>>,
}

impl CellTableDto {
    pub fn to_cell_table(&self) -> Result<CellTable, IoError> {
        let cells: BTreeMap<String, TwoCell> = self
            .cells
            .iter()
            .map(|(label, dto)| {
                (
                    label.clone(),
                    TwoCell {
                        label: label.clone(),
                        source: dto.src.clone(),
                        target: dto.tgt.clone(),
                        degree: dto.deg,
                        invariants: dto.inv.clone(),
                    },
                )
            })
            .collect();
        let parse_products =
            |map: &BTreeMap<String, String>| -> Result<BTreeMap<(String, String), String>, IoError> {
                map.iter()
                    .map(|(key, value)| {
                        let (a, b) = key
                            .split_once('|')
                            .ok_or_else(|| IoError::BadComposeKey(key.clone()))?;
                        Ok(((a.to_string(), b.to_string()), value.clone()))
                    })
                    .collect()
            };
        let mut boundary = BoundaryInvariants::default();
        for (name, values) in &self.boundary {
            for (label, value) in values {
                boundary.insert(name, label, *value);
            }
        }
        Ok(CellTable {
            cells,
            vertical: parse_products(&self.vertical)?,
            horizontal: parse_products(&self.horizontal)?,
            dagger: self.dagger.clone(),
            boundary,
        })
    }
}

/// `{"N": {"1": 1, "2": 3, ...}}`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OracleDto {
    #[serde(rename = "N")]
    pub counts: BTreeMap<String, u64>,
}

impl OracleDto {
    pub fn to_counts(&self) -> Result<BTreeMap<u64, u64>, IoError> {
        self.counts
            .iter()
            .map(|(k, &v)| {
                k.parse::<u64>()
                    .map(|n| (n, v))
                    .map_err(|_| IoError::BadGeneratorKey(k.clone()))
            })
            .collect()
    }
}

/// Generator indices of a middle-diagram side, 1-based.
pub fn to_side_set(arcs: &[usize]) -> BTreeSet<usize> {
    arcs.iter().copied().collect()
}
