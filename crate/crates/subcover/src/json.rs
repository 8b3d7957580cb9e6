//! Versioned JSON documents. Bit masks are hex strings; bit `i` is
//! coordinate `x_(i+1)`. A subspace's `rhs` mask has bit `i` set when row
//! `i` has right-hand side 1.

use serde::{Deserialize, Serialize};
use subcover_core::bounds::{Anchor, BoundEntry, N0Report, N0Status};
use subcover_core::cover::Restriction;
use subcover_core::solver::{Assumption, OriginConstraint, SolveResult, SolveStatus};
use subcover_core::{
    AffineSubspace, Canonical, ConstructionTag, Cover, CoverReport, Family, LinearCode,
};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported document version {0} (expected {FORMAT_VERSION})")]
    Version(u32),
    #[error("bad bit mask {0:?}")]
    Mask(String),
    #[error("entry {index}: {reason}")]
    Entry { index: usize, reason: String },
    #[error("unknown construction family {0:?}")]
    Family(String),
    #[error(transparent)]
    Core(#[from] subcover_core::Error),
}

pub fn hex(mask: u32) -> String {
    format!("{mask:#x}")
}

/// Accepts `0x`-prefixed hex, `0b`-prefixed binary or plain decimal.
pub fn parse_mask(s: &str) -> Result<u32, FormatError> {
    let t = s.trim();
    let parsed = if let Some(h) = t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
        u32::from_str_radix(h, 16)
    } else if let Some(b) = t.strip_prefix("0b") {
        u32::from_str_radix(b, 2)
    } else {
        t.parse()
    };
    parsed.map_err(|_| FormatError::Mask(s.to_string()))
}

fn check_version(v: u32) -> Result<(), FormatError> {
    if v == FORMAT_VERSION {
        Ok(())
    } else {
        Err(FormatError::Version(v))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TagDoc {
    pub family: String,
    pub n: u8,
    pub k: u32,
    pub d: u8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<u32>,
}

impl From<ConstructionTag> for TagDoc {
    fn from(t: ConstructionTag) -> Self {
        Self {
            family: t.family.name().to_string(),
            n: t.n,
            k: t.k,
            d: t.d,
            s: t.s,
        }
    }
}

impl TryFrom<&TagDoc> for ConstructionTag {
    type Error = FormatError;

    fn try_from(t: &TagDoc) -> Result<Self, FormatError> {
        let family =
            Family::from_name(&t.family).ok_or_else(|| FormatError::Family(t.family.clone()))?;
        Ok(ConstructionTag {
            family,
            n: t.n,
            k: t.k,
            d: t.d,
            s: t.s,
        })
    }
}

/// One subspace: hex normals, and `rhs` as a binary mask whose bit `i`
/// is the right-hand side of row `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubspaceDoc {
    pub normals: Vec<String>,
    pub rhs: String,
    pub n: u8,
}

impl SubspaceDoc {
    pub fn from_subspace(s: &AffineSubspace) -> Self {
        Self {
            normals: s.normals().iter().map(|&u| hex(u)).collect(),
            rhs: format!("{:#b}", s.rhs_bits()),
            n: s.ambient_dim(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryDoc {
    pub subspace: SubspaceDoc,
    pub mult: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverDoc {
    pub version: u32,
    pub n: u8,
    pub d: u8,
    pub size: u64,
    pub entries: Vec<EntryDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tag: Option<TagDoc>,
}

impl CoverDoc {
    pub fn from_cover(c: &Cover) -> Self {
        let entries = c
            .entries()
            .iter()
            .map(|(s, m)| EntryDoc {
                subspace: SubspaceDoc::from_subspace(s),
                mult: *m,
            })
            .collect();
        Self {
            version: FORMAT_VERSION,
            n: c.ambient_dim(),
            d: c.codim(),
            size: c.size(),
            entries,
            tag: c.tag().map(Into::into),
        }
    }

    /// Rebuilds the cover, canonicalising each entry. `size` is recomputed,
    /// not trusted.
    pub fn to_cover(&self) -> Result<Cover, FormatError> {
        check_version(self.version)?;
        let mut cover = Cover::new(self.n, self.d)?;
        for (index, e) in self.entries.iter().enumerate() {
            let bad = |reason: String| FormatError::Entry { index, reason };
            let sub = &e.subspace;
            if sub.n != self.n {
                return Err(bad(format!(
                    "subspace of F_2^{} in a cover of F_2^{}",
                    sub.n, self.n
                )));
            }
            let rhs = parse_mask(&sub.rhs)?;
            if sub.normals.len() < 32 && rhs >> sub.normals.len() != 0 {
                return Err(bad(format!(
                    "rhs {} has bits beyond {} rows",
                    sub.rhs,
                    sub.normals.len()
                )));
            }
            let rows = sub
                .normals
                .iter()
                .enumerate()
                .map(|(i, u)| Ok((parse_mask(u)?, rhs >> i & 1 == 1)))
                .collect::<Result<Vec<_>, FormatError>>()?;
            let s = match AffineSubspace::from_rows(self.n, &rows)? {
                Canonical::Subspace(s) => s,
                Canonical::Empty => return Err(bad("inconsistent constraints".into())),
                Canonical::Degenerate => return Err(bad("dependent normals".into())),
            };
            cover
                .insert(s, e.mult)
                .map_err(|err| bad(err.to_string()))?;
        }
        if let Some(t) = &self.tag {
            cover.set_tag(Some(t.try_into()?));
        }
        Ok(cover)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeDoc {
    pub version: u32,
    pub dim: u8,
    pub len: usize,
    pub rows: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_distance: Option<u32>,
}

impl CodeDoc {
    pub fn from_code(c: &LinearCode, min_distance: Option<u32>) -> Self {
        Self {
            version: FORMAT_VERSION,
            dim: c.dim(),
            len: c.len(),
            rows: c.rows().iter().map(|&u| hex(u)).collect(),
            min_distance,
        }
    }

    pub fn to_code(&self) -> Result<LinearCode, FormatError> {
        check_version(self.version)?;
        let rows = self
            .rows
            .iter()
            .map(|r| parse_mask(r))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(LinearCode::new(self.dim, rows)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDoc {
    pub version: u32,
    pub n: u8,
    pub d: u8,
    pub size: u64,
    pub k: u32,
    pub is_cover: bool,
    pub s: u64,
    pub min_nonzero: u64,
    pub max_nonzero: u64,
    pub incidences: u64,
    pub profile_checksum: String,
}

impl From<&CoverReport> for ReportDoc {
    fn from(r: &CoverReport) -> Self {
        Self {
            version: FORMAT_VERSION,
            n: r.n,
            d: r.d,
            size: r.size,
            k: r.k,
            is_cover: r.is_cover(),
            s: r.origin_count,
            min_nonzero: r.min_nonzero,
            max_nonzero: r.max_nonzero,
            incidences: r.incidences,
            profile_checksum: format!("{:016x}", r.profile_checksum),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RestrictionDoc {
    pub version: u32,
    pub normal: String,
    /// Index of the deleted coordinate.
    pub dropped_coordinate: u32,
    /// `|X|`, subspaces disjoint from the hyperplane.
    pub discarded: u64,
    /// `|Y|`, subspaces inside it.
    pub split: u64,
    pub cover: CoverDoc,
}

impl RestrictionDoc {
    pub fn new(u: u32, r: &Restriction) -> Self {
        Self {
            version: FORMAT_VERSION,
            normal: hex(u),
            dropped_coordinate: u.trailing_zeros(),
            discarded: r.discarded,
            split: r.split,
            cover: CoverDoc::from_cover(&r.cover),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolveDoc {
    pub version: u32,
    pub n: u8,
    pub k: u32,
    pub d: u8,
    /// Fixed origin multiplicity, if constrained.
    pub s: Option<u32>,
    pub status: String,
    pub value: Option<u64>,
    pub proof_lo: u64,
    pub nodes: u64,
    pub basis_reduction: bool,
    pub assumptions: Vec<String>,
    pub certificate: Option<CoverDoc>,
}

pub fn status_name(s: SolveStatus) -> &'static str {
    match s {
        SolveStatus::Optimal => "Optimal",
        SolveStatus::Feasible => "Feasible",
        SolveStatus::Infeasible => "Infeasible",
        SolveStatus::Unknown => "Unknown",
    }
}

impl From<&SolveResult> for SolveDoc {
    fn from(r: &SolveResult) -> Self {
        Self {
            version: FORMAT_VERSION,
            n: r.problem.n,
            k: r.problem.k,
            d: r.problem.d,
            s: match r.problem.origin {
                OriginConstraint::Any => None,
                OriginConstraint::Exact(s) => Some(s),
            },
            status: status_name(r.status).to_string(),
            value: r.value,
            proof_lo: r.proof_lo,
            nodes: r.nodes,
            basis_reduction: r.basis_reduction,
            assumptions: r
                .assumptions
                .iter()
                .map(|a| match a {
                    Assumption::OriginAtLeast(t) => format!("OriginAtLeast({t})"),
                })
                .collect(),
            certificate: r.certificate.as_ref().map(CoverDoc::from_cover),
        }
    }
}

/// One fact in an anchors file: either `value` or at least one of `lo`/`hi`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnchorDoc {
    pub n: u8,
    pub k: u32,
    #[serde(default = "one")]
    pub d: u8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lo: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hi: Option<u64>,
    pub source: String,
}

fn one() -> u8 {
    1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnchorsDoc {
    pub version: u32,
    pub anchors: Vec<AnchorDoc>,
}

impl AnchorsDoc {
    pub fn to_anchors(&self) -> Result<Vec<Anchor>, FormatError> {
        check_version(self.version)?;
        self.anchors
            .iter()
            .enumerate()
            .map(|(index, a)| {
                let (lo, hi) = match (a.value, a.lo, a.hi) {
                    (Some(v), None, None) => (Some(v), Some(v)),
                    (None, lo, hi) if lo.is_some() || hi.is_some() => (lo, hi),
                    _ => {
                        return Err(FormatError::Entry {
                            index,
                            reason: "give either value or lo/hi".into(),
                        });
                    }
                };
                Ok(Anchor {
                    n: a.n,
                    k: a.k,
                    d: a.d,
                    lo,
                    hi,
                    source: a.source.clone(),
                })
            })
            .collect()
    }

    pub fn from_anchors(anchors: &[Anchor]) -> Self {
        let anchors = anchors
            .iter()
            .map(|a| {
                let exact = a.lo.is_some() && a.lo == a.hi;
                AnchorDoc {
                    n: a.n,
                    k: a.k,
                    d: a.d,
                    value: if exact { a.lo } else { None },
                    lo: if exact { None } else { a.lo },
                    hi: if exact { None } else { a.hi },
                    source: a.source.clone(),
                }
            })
            .collect();
        Self {
            version: FORMAT_VERSION,
            anchors,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CellDoc {
    pub n: u8,
    pub k: u32,
    pub d: u8,
    pub lo: u64,
    pub hi: u64,
    pub exact: bool,
    /// Exact and equal to `n + 2^d k - d - 2`.
    pub tight: bool,
    pub lo_provenance: Vec<String>,
    pub hi_provenance: Vec<String>,
}

impl From<&BoundEntry> for CellDoc {
    fn from(e: &BoundEntry) -> Self {
        Self {
            n: e.n,
            k: e.k,
            d: e.d,
            lo: e.lo,
            hi: e.hi,
            exact: e.is_exact(),
            tight: e.attains_general_upper(),
            lo_provenance: e.lo_provenance.iter().map(|r| r.label()).collect(),
            hi_provenance: e.hi_provenance.iter().map(|r| r.label()).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ThresholdDoc {
    pub k: u32,
    /// `n0` when determined.
    pub n0: Option<u8>,
    pub at_least: u8,
    pub at_most: Option<u8>,
}

impl From<&N0Report> for ThresholdDoc {
    fn from(r: &N0Report) -> Self {
        match r.status {
            N0Status::Exact(n) => Self {
                k: r.k,
                n0: Some(n),
                at_least: n,
                at_most: Some(n),
            },
            N0Status::Bounded { at_least, at_most } => Self {
                k: r.k,
                n0: None,
                at_least,
                at_most,
            },
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TableDoc {
    pub version: u32,
    pub cells: Vec<CellDoc>,
    pub thresholds: Vec<ThresholdDoc>,
}
