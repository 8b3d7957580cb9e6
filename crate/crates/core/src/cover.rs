//! Multisets of equal-codimension affine subspaces and their verification.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::gf2::{self, full_mask, AffineSubspace};

/// Which construction produced a cover.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    ThmA,
    Lemma31,
    ReduceD,
    Lift,
    SMax,
    Diagonal,
    GolayCover,
    GvRandom,
    ParallelPad,
    /// Found by the exact solver.
    Search,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::ThmA => "ThmA",
            Family::Lemma31 => "Lemma31",
            Family::ReduceD => "ReduceD",
            Family::Lift => "Lift",
            Family::SMax => "SMax",
            Family::Diagonal => "Diagonal",
            Family::GolayCover => "GolayCover",
            Family::GvRandom => "GVRandom",
            Family::ParallelPad => "ParallelPad",
            Family::Search => "Search",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        [
            Family::ThmA,
            Family::Lemma31,
            Family::ReduceD,
            Family::Lift,
            Family::SMax,
            Family::Diagonal,
            Family::GolayCover,
            Family::GvRandom,
            Family::ParallelPad,
            Family::Search,
        ]
        .into_iter()
        .find(|f| f.name() == name)
    }
}

/// Provenance of an emitted cover.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ConstructionTag {
    pub family: Family,
    pub n: u8,
    pub k: u32,
    pub d: u8,
    pub s: Option<u32>,
}

/// A multiset of codimension-`d` affine subspaces of `F_2^n`.
///
/// Entries are kept sorted by canonical subspace order with multiplicities
/// merged, so two covers are equal as multisets iff their entries are equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cover {
    n: u8,
    d: u8,
    entries: Vec<(AffineSubspace, u32)>,
    tag: Option<ConstructionTag>,
}

impl Cover {
    pub fn new(n: u8, d: u8) -> Result<Self> {
        let n = gf2::check_dim(n as u32)?;
        if d == 0 || d > n {
            return Err(Error::InvalidParameters(alloc::format!(
                "codimension {d} outside 1..={n}"
            )));
        }
        Ok(Self {
            n,
            d,
            entries: Vec::new(),
            tag: None,
        })
    }

    pub fn from_entries(
        n: u8,
        d: u8,
        entries: impl IntoIterator<Item = (AffineSubspace, u32)>,
    ) -> Result<Self> {
        let mut cover = Self::new(n, d)?;
        for (s, m) in entries {
            cover.insert(s, m)?;
        }
        Ok(cover)
    }

    /// Adds `mult` copies of `s`. Zero multiplicities are ignored.
    pub fn insert(&mut self, s: AffineSubspace, mult: u32) -> Result<()> {
        if s.ambient_dim() != self.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: s.ambient_dim(),
            });
        }
        if s.codim() != self.d {
            return Err(Error::CodimensionMismatch {
                expected: self.d,
                found: s.codim(),
            });
        }
        if mult == 0 {
            return Ok(());
        }
        match self.entries.binary_search_by(|(e, _)| e.cmp(&s)) {
            Ok(i) => self.entries[i].1 += mult,
            Err(i) => self.entries.insert(i, (s, mult)),
        }
        Ok(())
    }

    /// Adds copies of the subspace given by raw constraint rows.
    pub fn insert_rows(&mut self, rows: &[(u32, bool)], mult: u32) -> Result<()> {
        let s = AffineSubspace::from_rows_strict(self.n, rows)?;
        self.insert(s, mult)
    }

    pub fn with_tag(mut self, tag: ConstructionTag) -> Self {
        self.tag = Some(tag);
        self
    }

    pub fn tag(&self) -> Option<ConstructionTag> {
        self.tag
    }

    pub fn set_tag(&mut self, tag: Option<ConstructionTag>) {
        self.tag = tag;
    }

    pub fn ambient_dim(&self) -> u8 {
        self.n
    }

    pub fn codim(&self) -> u8 {
        self.d
    }

    pub fn entries(&self) -> &[(AffineSubspace, u32)] {
        &self.entries
    }

    /// Total number of subspaces counted with multiplicity.
    pub fn size(&self) -> u64 {
        self.entries.iter().map(|e| e.1 as u64).sum()
    }

    /// Subspaces with multiplicity expanded, in canonical order.
    pub fn expanded(&self) -> impl Iterator<Item = &AffineSubspace> + '_ {
        self.entries
            .iter()
            .flat_map(|(s, m)| core::iter::repeat_n(s, *m as usize))
    }

    /// Number of subspaces (with multiplicity) through the origin.
    pub fn origin_count(&self) -> u64 {
        self.entries
            .iter()
            .filter(|e| e.0.contains_origin())
            .map(|e| e.1 as u64)
            .sum()
    }

    /// Coverage count of every point of `F_2^n`, indexed by mask.
    ///
    /// Walks each subspace's `2^(n-d)` points.
    pub fn coverage_counts(&self) -> Vec<u32> {
        let mut counts = vec![0u32; 1usize << self.n];
        for (s, m) in &self.entries {
            s.for_each_point(|x| counts[x as usize] += m);
        }
        counts
    }

    /// Same as [`Cover::coverage_counts`], computed point by point with
    /// membership tests instead.
    pub fn coverage_counts_pointwise(&self) -> Vec<u32> {
        (0..1u32 << self.n)
            .map(|x| {
                self.entries
                    .iter()
                    .filter(|(s, _)| s.contains_bits(x))
                    .map(|(_, m)| *m)
                    .sum()
            })
            .collect()
    }

    /// Exact coverage profile and classification for multiplicity `k`.
    pub fn verify(&self, k: u32) -> CoverReport {
        CoverReport::from_counts(self.n, self.d, self.size(), k, &self.coverage_counts())
    }

    /// Adds the parallel pair `{x·u = 0}`, `{x·u = 1}`, raising every
    /// point's coverage by one. Only defined for hyperplane covers.
    pub fn add_parallel_pair(&self, u: u32) -> Result<Cover> {
        if self.d != 1 {
            return Err(Error::CodimensionMismatch {
                expected: 1,
                found: self.d,
            });
        }
        let mut out = self.clone();
        out.insert(AffineSubspace::hyperplane(self.n, u, false)?, 1)?;
        out.insert(AffineSubspace::hyperplane(self.n, u, true)?, 1)?;
        Ok(out)
    }

    /// Multiplicity-weighted counts of the subspaces disjoint from
    /// (`|X|`) and contained in (`|Y|`) the hyperplane `{x·u = 0}`.
    pub fn restriction_counts(&self, u: u32) -> Result<(u64, u64)> {
        self.check_restriction_normal(u)?;
        let mut disjoint = 0;
        let mut contained = 0;
        for (s, m) in &self.entries {
            match classify_against(s, u) {
                Relation::Disjoint => disjoint += *m as u64,
                Relation::Contained => contained += *m as u64,
                Relation::Proper => {}
            }
        }
        Ok((disjoint, contained))
    }

    fn check_restriction_normal(&self, u: u32) -> Result<()> {
        if u == 0 || u & !full_mask(self.n) != 0 {
            return Err(Error::InvalidParameters(alloc::format!(
                "restriction normal {u:#x} must be a nonzero vector of dimension {}",
                self.n
            )));
        }
        Ok(())
    }

    /// Restricts the cover to the hyperplane `H = {x·u = 0}` and expresses
    /// the result in `F_2^(n-1)`.
    ///
    /// Subspaces disjoint from `H` are dropped, subspaces inside `H` are
    /// split in two, and the rest are intersected with `H`. Coordinates of
    /// `H` are obtained by deleting coordinate `p`, the lowest set bit of
    /// `u` (see [`RestrictionMap`]).
    pub fn restrict_to_hyperplane(&self, u: u32) -> Result<Restriction> {
        self.check_restriction_normal(u)?;
        if self.d >= self.n {
            return Err(Error::InvalidParameters(alloc::format!(
                "cannot restrict a codimension-{} cover of F_2^{}",
                self.d,
                self.n
            )));
        }
        let map = RestrictionMap::new(self.n, u);
        let mut out = Cover::new(self.n - 1, self.d)?;
        let mut discarded = 0;
        let mut split = 0;
        for (s, m) in &self.entries {
            let rows: Vec<(u32, bool)> =
                s.rows().map(|(w, c)| (map.project_normal(w), c)).collect();
            let Some(reduced) = gf2::reduce_rows(rows) else {
                discarded += *m as u64;
                continue;
            };
            if reduced.len() == self.d as usize {
                out.insert(
                    AffineSubspace::canonical_from_rows(self.n - 1, reduced).into_subspace()?,
                    *m,
                )?;
                continue;
            }
            // Contained in H: one constraint became dependent. Split along the
            // lowest coordinate that is not a pivot of the remaining rows.
            let pivots = reduced
                .iter()
                .fold(0u32, |a, r| a | (r.0 & r.0.wrapping_neg()));
            let free = full_mask(self.n - 1) & !pivots;
            let e = free & free.wrapping_neg();
            for c in [false, true] {
                let mut rows = reduced.clone();
                rows.push((e, c));
                out.insert(
                    AffineSubspace::canonical_from_rows(self.n - 1, rows).into_subspace()?,
                    *m,
                )?;
            }
            split += *m as u64;
        }
        Ok(Restriction {
            cover: out,
            map,
            discarded,
            split,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Relation {
    Disjoint,
    Contained,
    Proper,
}

/// How `s` meets the linear hyperplane `{x·u = 0}`: disjoint iff `u` is a
/// combination of the normals with odd right-hand side, contained iff with
/// even right-hand side.
fn classify_against(s: &AffineSubspace, u: u32) -> Relation {
    let mut residual = u;
    let mut rhs = false;
    for (w, c) in s.rows() {
        let pivot = w & w.wrapping_neg();
        if residual & pivot != 0 {
            residual ^= w;
            rhs ^= c;
        }
    }
    match (residual, rhs) {
        (0, true) => Relation::Disjoint,
        (0, false) => Relation::Contained,
        _ => Relation::Proper,
    }
}

/// Coordinate change identifying `H = {x·u = 0}` with `F_2^(n-1)`.
///
/// A point of `H` is mapped to `F_2^(n-1)` by deleting coordinate `p`
/// (the lowest set bit of `u`); the deleted coordinate is recovered as the
/// dot product of the remaining coordinates with `u` minus bit `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RestrictionMap {
    n: u8,
    u: u32,
    pivot: u32,
}

impl RestrictionMap {
    pub fn new(n: u8, u: u32) -> Self {
        debug_assert!(u != 0);
        Self {
            n,
            u,
            pivot: u.trailing_zeros(),
        }
    }

    fn delete_pivot(&self, x: u32) -> u32 {
        let low = x & ((1u32 << self.pivot) - 1);
        let high = x >> (self.pivot + 1);
        low | (high << self.pivot)
    }

    fn insert_pivot(&self, y: u32, bit: bool) -> u32 {
        let low = y & ((1u32 << self.pivot) - 1);
        let high = y >> self.pivot;
        low | ((bit as u32) << self.pivot) | (high << (self.pivot + 1))
    }

    /// Coordinates in `F_2^(n-1)` of a point `x` of `H`.
    pub fn to_hyperplane(&self, x: u32) -> u32 {
        debug_assert!(!gf2::dot_bits(x, self.u));
        self.delete_pivot(x)
    }

    /// The point of `H` with coordinates `y`.
    pub fn from_hyperplane(&self, y: u32) -> u32 {
        let rest = self.delete_pivot(self.u);
        self.insert_pivot(y, gf2::dot_bits(y, rest))
    }

    /// The normal in `F_2^(n-1)` of the restriction of the functional `w` to `H`.
    pub fn project_normal(&self, w: u32) -> u32 {
        let base = self.delete_pivot(w);
        if w >> self.pivot & 1 == 1 {
            base ^ self.delete_pivot(self.u)
        } else {
            base
        }
    }

    pub fn ambient_dim(&self) -> u8 {
        self.n
    }
}

/// Result of [`Cover::restrict_to_hyperplane`].
#[derive(Clone, Debug)]
pub struct Restriction {
    pub cover: Cover,
    pub map: RestrictionMap,
    /// `|X|`: subspaces disjoint from the hyperplane.
    pub discarded: u64,
    /// `|Y|`: subspaces contained in the hyperplane.
    pub split: u64,
}

/// Coverage profile of a cover, with its `(k, d; s)` classification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverReport {
    pub n: u8,
    pub d: u8,
    pub size: u64,
    pub k: u32,
    /// Times the origin is covered.
    pub origin_count: u64,
    pub min_nonzero: u64,
    pub max_nonzero: u64,
    /// FNV-1a 64 over the little-endian `u32` counts in point order.
    pub profile_checksum: u64,
    pub incidences: u64,
}

impl CoverReport {
    pub fn from_counts(n: u8, d: u8, size: u64, k: u32, counts: &[u32]) -> Self {
        let nonzero = &counts[1..];
        Self {
            n,
            d,
            size,
            k,
            origin_count: counts[0] as u64,
            min_nonzero: nonzero.iter().copied().min().unwrap_or(0) as u64,
            max_nonzero: nonzero.iter().copied().max().unwrap_or(0) as u64,
            profile_checksum: profile_checksum(counts),
            incidences: counts.iter().map(|&c| c as u64).sum(),
        }
    }

    /// Every nonzero point covered at least `k` times and the origin at most `k - 1`.
    pub fn is_cover_for(&self, k: u32) -> bool {
        k >= 1 && self.min_nonzero >= k as u64 && self.origin_count < k as u64
    }

    /// Whether this is a `(k, d; s)`-cover for the recorded `k`.
    pub fn is_cover(&self) -> bool {
        self.is_cover_for(self.k)
    }
}

/// FNV-1a 64 over the counts, each encoded as 4 little-endian bytes.
pub fn profile_checksum(counts: &[u32]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for c in counts {
        for b in c.to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
    h
}
