//! Text and JSON forms of transfer systems.
//!
//! ```text
//! // comments run to the end of the line
//! group: C2xC2
//! mode: classes        (optional; lifts each arrow to whole conjugacy classes)
//! e -> C2#1
//! e -> [0,3]
//! ```
//!
//! The file stands for the least transfer system containing its arrows.

use std::sync::Arc;

use serde::Serialize;

use super::{Relation, TransferSystem};
use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::lattice::SubgroupLattice;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LiftMode {
    /// Arrows name concrete subgroups.
    #[default]
    Subgroups,
    /// Arrows name conjugacy classes and are lifted to every contained pair of members.
    Classes,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub from: String,
    pub to: String,
    /// Byte offset of the arrow's line.
    pub pos: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransferFile {
    pub group: String,
    pub mode: LiftMode,
    pub arrows: Vec<Arrow>,
}

fn normalize_spec(s: &str) -> String {
    s.chars().filter(|c| !c.is_whitespace()).collect()
}

pub fn parse_transfer_file(text: &str) -> Result<TransferFile> {
    let mut group = None;
    let mut mode = LiftMode::Subgroups;
    let mut arrows = Vec::new();
    let mut offset = 0;
    for (lineno, raw) in text.split_inclusive('\n').enumerate() {
        let pos = offset;
        offset += raw.len();
        let line = raw.split("//").next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let at = |msg: String| Error::parse(pos, format!("line {}: {msg}", lineno + 1));
        if let Some(rest) = line.strip_prefix("group:") {
            if group.is_some() {
                return Err(at("duplicate group header".into()));
            }
            let spec = normalize_spec(rest);
            if spec.is_empty() {
                return Err(at("empty group spec".into()));
            }
            group = Some(spec);
        } else if let Some(rest) = line.strip_prefix("mode:") {
            mode = match rest.trim() {
                "subgroups" => LiftMode::Subgroups,
                "classes" => LiftMode::Classes,
                other => return Err(at(format!("unknown mode '{other}'"))),
            };
        } else if let Some((from, to)) = line.split_once("->") {
            if group.is_none() {
                return Err(at("arrow before the group header".into()));
            }
            let (from, to) = (from.trim(), to.trim());
            if from.is_empty() || to.is_empty() || to.contains("->") {
                return Err(at(format!("malformed arrow '{line}'")));
            }
            arrows.push(Arrow {
                from: from.into(),
                to: to.into(),
                pos,
            });
        } else {
            return Err(at(format!("expected 'group:', 'mode:' or an arrow, found '{line}'")));
        }
    }
    let group = group.ok_or_else(|| Error::parse(0, "missing 'group:' header"))?;
    Ok(TransferFile { group, mode, arrows })
}

impl TransferFile {
    pub fn parse(text: &str) -> Result<Self> {
        parse_transfer_file(text)
    }

    /// Whether the header names the same group as `spec` (ignoring whitespace).
    pub fn names_group(&self, spec: &str) -> bool {
        self.group == normalize_spec(spec)
    }

    /// Resolves the arrows' labels against `lattice`. In class mode a bare name
    /// such as `S3` also resolves when its subgroups form a single conjugacy class.
    pub fn resolve(&self, lattice: &SubgroupLattice) -> Result<Vec<(usize, usize)>> {
        let one = |label: &str, pos: usize| {
            lattice.resolve(label).or_else(|e| match self.mode {
                LiftMode::Classes => resolve_class(lattice, label).ok_or(e),
                LiftMode::Subgroups => Err(e),
            })
            .map_err(|e| Error::parse(pos, e.to_string()))
        };
        self.arrows
            .iter()
            .map(|a| Ok((one(&a.from, a.pos)?, one(&a.to, a.pos)?)))
            .collect()
    }

    fn require_group(&self, lattice: &SubgroupLattice) -> Result<()> {
        if self.names_group(lattice.group().name()) {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "file is for group {} but the lattice is for {}",
                self.group,
                lattice.group().name()
            )))
        }
    }

    /// The arrows as written (lifted to classes in class mode), made reflexive and
    /// transitive but otherwise unclosed. Validating this relation tells whether the
    /// arrows already form a transfer system.
    pub fn relation(&self, lattice: &SubgroupLattice) -> Result<Relation> {
        self.require_group(lattice)?;
        let n = lattice.len();
        let mut rel: Relation = (0..n).map(|k| BitSet::from_indices(n, [k])).collect();
        for (k, h) in self.resolve(lattice)? {
            match self.mode {
                LiftMode::Subgroups => {
                    rel[k].insert(h);
                }
                LiftMode::Classes => {
                    for a in lattice.class_in(lattice.top(), k) {
                        for b in lattice.class_in(lattice.top(), h) {
                            if lattice.contains(b, a) {
                                rel[a].insert(b);
                            }
                        }
                    }
                }
            }
        }
        // Warshall: rows only ever grow
        for m in 0..n {
            let row_m = rel[m].clone();
            for row in rel.iter_mut() {
                if row.contains(m) {
                    row.union_with(&row_m);
                }
            }
        }
        Ok(rel)
    }

    pub fn build(&self, lattice: Arc<SubgroupLattice>) -> Result<TransferSystem> {
        self.require_group(&lattice)?;
        let pairs = self.resolve(&lattice)?;
        match self.mode {
            LiftMode::Subgroups => TransferSystem::generate(lattice, &pairs),
            LiftMode::Classes => TransferSystem::generate_by_class(lattice, &pairs),
        }
    }
}

fn resolve_class(lattice: &SubgroupLattice, name: &str) -> Option<usize> {
    let members: Vec<usize> = (0..lattice.len()).filter(|&s| lattice.name(s) == name.trim()).collect();
    let first = *members.first()?;
    let class = lattice.class_of(first);
    members.iter().all(|&s| lattice.class_of(s) == class).then_some(first)
}

/// Serializable form of a transfer system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransferSystemJson {
    pub group: String,
    pub subgroups: Vec<String>,
    /// Non-reflexive pairs `[K, H]` meaning `K -> H`.
    pub pairs: Vec<[String; 2]>,
    /// `matrix[k][h]` is 1 when `K -> H`.
    pub matrix: Vec<Vec<u8>>,
}

impl TransferSystem {
    /// Pairs of the transitive reduction, reflexive pairs excluded.
    pub fn hasse_pairs(&self) -> Vec<(usize, usize)> {
        self.proper_pairs()
            .filter(|&(k, h)| {
                !self.relation()[k]
                    .iter()
                    .any(|m| m != k && m != h && self.relates(m, h))
            })
            .collect()
    }

    /// The text form: the group header and the covering arrows.
    pub fn to_text(&self) -> String {
        let lat = self.lattice();
        let mut s = format!("group: {}\n", lat.group().name());
        for (k, h) in self.hasse_pairs() {
            s.push_str(&format!("{} -> {}\n", lat.label(k), lat.label(h)));
        }
        s
    }

    pub fn to_json(&self) -> TransferSystemJson {
        let lat = self.lattice();
        let n = lat.len();
        TransferSystemJson {
            group: lat.group().name().to_string(),
            subgroups: (0..n).map(|s| lat.label(s).to_string()).collect(),
            pairs: self
                .proper_pairs()
                .map(|(k, h)| [lat.label(k).to_string(), lat.label(h).to_string()])
                .collect(),
            matrix: (0..n)
                .map(|k| (0..n).map(|h| self.relates(k, h) as u8).collect())
                .collect(),
        }
    }
}
