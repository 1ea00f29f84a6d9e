//! A session holds named presentations, diagrams, and labeled
//! correspondences, runs composition requests against them, and emits a
//! composition table with transpose closure and unit rows filled in.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::algebra::{AlgebraError, CompositionTable, LabelInfo};
use crate::correspondence::{
    compose, transpose, transpose_label, unit, ComposeError, ComposeMaps, CompositeCorrespondence,
    Correspondence, MiddleDiagram,
};
use crate::io::{to_side_set, IoError, RequestDto, SessionDto};
use crate::presentation::{parse_pd, wirtinger, Diagram, Presentation, PresentationError};

#[derive(Debug, Error)]
pub enum SessionError {
    #[error("duplicate label {0}")]
    DuplicateLabel(String),
    #[error("unknown correspondence {0}")]
    UnknownCorrespondence(String),
    #[error("unknown presentation {0}")]
    UnknownPresentation(String),
    #[error("pair ({0},{1}) already composed")]
    DuplicateRequest(String, String),
    #[error("entry ({left},{right}) collides with the transpose of ({src_left},{src_right})")]
    TransposeCollision {
        left: String,
        right: String,
        src_left: String,
        src_right: String,
    },
    #[error("components of ({0},{1}) are not closed under transposition of the sheet pairs")]
    TransposeMatching(String, String),
    #[error(transparent)]
    Compose(#[from] ComposeError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Io(#[from] IoError),
    #[error(transparent)]
    Table(#[from] AlgebraError),
}

#[derive(Debug, Default)]
pub struct Session {
    presentations: BTreeMap<String, Presentation>,
    diagrams: BTreeMap<String, Diagram>,
    correspondences: BTreeMap<String, Correspondence>,
    composites: Vec<(String, String, CompositeCorrespondence)>,
}

impl Session {
    pub fn new() -> Self {
        Session::default()
    }

    pub fn from_dto(dto: &SessionDto) -> Result<Self, SessionError> {
        let mut session = Session::new();
        for (name, p) in &dto.presentations {
            session.add_presentation(name, p.to_presentation()?)?;
        }
        for (name, pd) in &dto.diagrams {
            let diagram = parse_pd(pd, 0)?;
            session.add_presentation(name, wirtinger(&diagram))?;
            session.diagrams.insert(name.clone(), diagram);
        }
        for (label, graph) in &dto.units {
            let mut u = unit(graph);
            u.label = label.clone();
            session.add_correspondence(u)?;
        }
        for (label, corr) in &dto.correspondences {
            let make_side = |side: &crate::io::SideDto| -> Result<_, SessionError> {
                let presentation = session
                    .presentations
                    .get(&side.presentation)
                    .ok_or_else(|| SessionError::UnknownPresentation(side.presentation.clone()))?;
                let coloring = crate::io::ColoringDto {
                    degree: side.degree,
                    images: side.images.clone(),
                };
                let rep = coloring.to_rep(presentation)?;
                Ok(crate::correspondence::CoveringSide::new(
                    rep,
                    side.locus.clone(),
                    side.marked.iter().cloned().collect(),
                    side.graph.clone(),
                )?)
            };
            let c = crate::correspondence::make_correspondence(
                label.clone(),
                make_side(&corr.left)?,
                make_side(&corr.right)?,
            )?;
            session.add_correspondence(c)?;
        }
        Ok(session)
    }

    pub fn add_presentation(&mut self, name: &str, p: Presentation) -> Result<(), SessionError> {
        if self.presentations.contains_key(name) {
            return Err(SessionError::DuplicateLabel(name.to_string()));
        }
        self.presentations.insert(name.to_string(), p);
        Ok(())
    }

    pub fn add_correspondence(&mut self, c: Correspondence) -> Result<(), SessionError> {
        if self.correspondences.contains_key(&c.label) {
            return Err(SessionError::DuplicateLabel(c.label.clone()));
        }
        self.correspondences.insert(c.label.clone(), c);
        Ok(())
    }

    pub fn presentation(&self, name: &str) -> Result<&Presentation, SessionError> {
        self.presentations
            .get(name)
            .ok_or_else(|| SessionError::UnknownPresentation(name.to_string()))
    }

    pub fn correspondence(&self, label: &str) -> Result<&Correspondence, SessionError> {
        self.correspondences
            .get(label)
            .ok_or_else(|| SessionError::UnknownCorrespondence(label.to_string()))
    }

    pub fn correspondences(&self) -> &BTreeMap<String, Correspondence> {
        &self.correspondences
    }

    pub fn composites(&self) -> &[(String, String, CompositeCorrespondence)] {
        &self.composites
    }

    /// Run one composition request and store the composite.
    pub fn run_request(
        &mut self,
        req: &RequestDto,
    ) -> Result<&CompositeCorrespondence, SessionError> {
        if self
            .composites
            .iter()
            .any(|(a, b, _)| a == &req.left && b == &req.right)
        {
            return Err(SessionError::DuplicateRequest(
                req.left.clone(),
                req.right.clone(),
            ));
        }
        let c1 = self.correspondence(&req.left)?.clone();
        let c2 = self.correspondence(&req.right)?.clone();
        let presentation = self.presentation(&req.middle)?.clone();
        let mid = MiddleDiagram {
            label: req.middle.clone(),
            presentation: presentation.clone(),
            side1: to_side_set(&req.side1_arcs),
            side2: to_side_set(&req.side2_arcs),
        };
        let maps = ComposeMaps {
            left_extension: req.left_extension.to_images(presentation.generator_count)?,
            right_extension: req
                .right_extension
                .to_images(presentation.generator_count)?,
        };
        let composite = compose(&c1, &c2, &mid, &maps)?;
        self.composites
            .push((req.left.clone(), req.right.clone(), composite));
        Ok(&self.composites.last().unwrap().2)
    }

    /// Label of the transpose of a stored correspondence: itself when the
    /// two sides coincide, otherwise the toggled label.
    fn transpose_label_of(&self, label: &str) -> String {
        match self.correspondences.get(label) {
            Some(c) if c.left == c.right => label.to_string(),
            _ => transpose_label(label),
        }
    }

    /// Emit the composition table: every stored correspondence and every
    /// composite component becomes a label; transposes and unit rows are
    /// filled in automatically. Also returns the graph-composable label
    /// pairs that have no entry (the closure gaps of the truncation).
    pub fn emit_table(&self) -> Result<(CompositionTable, Vec<(String, String)>), SessionError> {
        let mut labels: BTreeMap<String, LabelInfo> = BTreeMap::new();
        let mut entries: BTreeMap<(String, String), Vec<String>> = BTreeMap::new();

        for (label, c) in &self.correspondences {
            let t_label = self.transpose_label_of(label);
            labels.insert(
                label.clone(),
                LabelInfo {
                    n: c.left_degree(),
                    m: c.right_degree(),
                    source: c.source_graph().to_string(),
                    target: c.target_graph().to_string(),
                    transpose: t_label.clone(),
                },
            );
            if t_label != *label {
                let t = transpose(c);
                labels.insert(
                    t_label.clone(),
                    LabelInfo {
                        n: t.left_degree(),
                        m: t.right_degree(),
                        source: t.source_graph().to_string(),
                        target: t.target_graph().to_string(),
                        transpose: label.clone(),
                    },
                );
            }
        }

        for (left, right, composite) in &self.composites {
            let self_paired =
                self.transpose_label_of(right) == *left && self.transpose_label_of(left) == *right;
            let component_transposes = if self_paired {
                self.match_swapped_orbits(left, right, composite)?
            } else {
                composite
                    .components
                    .iter()
                    .map(|comp| transpose_label(&comp.label))
                    .collect()
            };
            let mut component_labels = Vec::new();
            for (comp, t_label) in composite.components.iter().zip(&component_transposes) {
                if labels.contains_key(&comp.label) {
                    return Err(SessionError::DuplicateLabel(comp.label.clone()));
                }
                labels.insert(
                    comp.label.clone(),
                    LabelInfo {
                        n: comp.outer_left_degree,
                        m: comp.outer_right_degree,
                        source: comp.source_graph.clone(),
                        target: comp.target_graph.clone(),
                        transpose: t_label.clone(),
                    },
                );
                component_labels.push(comp.label.clone());
                if !self_paired {
                    labels.insert(
                        t_label.clone(),
                        LabelInfo {
                            n: comp.outer_right_degree,
                            m: comp.outer_left_degree,
                            source: comp.target_graph.clone(),
                            target: comp.source_graph.clone(),
                            transpose: comp.label.clone(),
                        },
                    );
                }
            }
            entries.insert((left.clone(), right.clone()), component_labels.clone());
            if !self_paired {
                let mirror_key = (
                    self.transpose_label_of(right),
                    self.transpose_label_of(left),
                );
                let mirrored: Vec<String> = component_transposes.clone();
                if let Some(existing) = entries.get(&mirror_key) {
                    if *existing != mirrored {
                        return Err(SessionError::TransposeCollision {
                            left: mirror_key.0,
                            right: mirror_key.1,
                            src_left: left.clone(),
                            src_right: right.clone(),
                        });
                    }
                } else {
                    entries.insert(mirror_key, mirrored);
                }
            }
        }

        // unit rows for every registered unit
        let units: Vec<(String, String)> = self
            .correspondences
            .values()
            .filter(|c| c.left_degree() == 1 && c.right_degree() == 1 && c.left == c.right)
            .map(|c| (c.label.clone(), c.source_graph().to_string()))
            .collect();
        for (u_label, graph) in &units {
            let others: Vec<(String, LabelInfo)> =
                labels.iter().map(|(l, i)| (l.clone(), i.clone())).collect();
            for (label, info) in others {
                if info.source == *graph {
                    entries
                        .entry((u_label.clone(), label.clone()))
                        .or_insert_with(|| vec![label.clone()]);
                }
                if info.target == *graph {
                    entries
                        .entry((label.clone(), u_label.clone()))
                        .or_insert_with(|| vec![label.clone()]);
                }
            }
        }

        let table = CompositionTable::new(labels, entries)?;
        let mut gaps = Vec::new();
        for (a, ia) in table.labels() {
            for (b, ib) in table.labels() {
                if ia.target == ib.source && table.entry(a, b).is_none() {
                    gaps.push((a.clone(), b.clone()));
                }
            }
        }
        Ok((table, gaps))
    }

    /// For a self-paired entry (the mirrored key is the same pair), the
    /// transpose of each component is the component whose orbit is the
    /// sheet-pair swap of its own.
    fn match_swapped_orbits(
        &self,
        left: &str,
        right: &str,
        composite: &CompositeCorrespondence,
    ) -> Result<Vec<String>, SessionError> {
        let mut out = Vec::new();
        for comp in &composite.components {
            let mut swapped: Vec<(usize, usize)> =
                comp.orbit.iter().map(|&(i, j)| (j, i)).collect();
            swapped.sort_unstable();
            let partner = composite
                .components
                .iter()
                .find(|other| other.orbit == swapped)
                .ok_or_else(|| {
                    SessionError::TransposeMatching(left.to_string(), right.to_string())
                })?;
            out.push(partner.label.clone());
        }
        Ok(out)
    }
}
