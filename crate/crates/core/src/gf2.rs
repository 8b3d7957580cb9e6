//! Bit-parallel linear algebra over GF(2).
//!
//! A vector of `F_2^n` is a `u32` mask with bit `i` holding coordinate
//! `x_{i+1}`. Affine subspaces are stored in constraint form: `d` linearly
//! independent normals `u_i` and right-hand sides `c_i`, describing
//! `{x : x·u_i = c_i for all i}`. The augmented matrix `[U | c]` is kept in
//! reduced row echelon form with pivots taken from the lowest coordinate
//! upwards, which makes equality of subspaces equality of representations.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::error::{Error, Result};

/// Largest ambient dimension the bit representation supports.
pub const MAX_DIM: u8 = 24;

/// Ambient-dimension cap used by enumerating operations unless raised.
pub const DEFAULT_DIM_CAP: u8 = 20;

/// Parity of the bitwise AND of two masks.
#[inline]
pub fn dot_bits(x: u32, u: u32) -> bool {
    (x & u).count_ones() & 1 == 1
}

#[inline]
pub(crate) fn full_mask(n: u8) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

pub(crate) fn check_dim(n: u32) -> Result<u8> {
    if n == 0 || n > MAX_DIM as u32 {
        return Err(Error::DimensionOutOfRange(n));
    }
    Ok(n as u8)
}

/// A vector of `F_2^n`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GfVector {
    bits: u32,
    n: u8,
}

impl GfVector {
    pub fn new(bits: u32, n: u8) -> Result<Self> {
        let n = check_dim(n as u32)?;
        if bits & !full_mask(n) != 0 {
            return Err(Error::MaskOutOfRange { mask: bits, n });
        }
        Ok(Self { bits, n })
    }

    pub fn zero(n: u8) -> Result<Self> {
        Self::new(0, n)
    }

    /// The standard basis vector `e_{i+1}` (zero-based index `i`).
    pub fn unit(n: u8, i: u8) -> Result<Self> {
        if i >= n {
            return Err(Error::MaskOutOfRange {
                mask: 1u32.checked_shl(i as u32).unwrap_or(0),
                n,
            });
        }
        Self::new(1 << i, n)
    }

    /// The all-ones vector.
    pub fn ones(n: u8) -> Result<Self> {
        let n = check_dim(n as u32)?;
        Ok(Self {
            bits: full_mask(n),
            n,
        })
    }

    #[inline]
    pub fn bits(self) -> u32 {
        self.bits
    }

    #[inline]
    pub fn dim(self) -> u8 {
        self.n
    }

    pub fn weight(self) -> u32 {
        self.bits.count_ones()
    }

    pub fn is_zero(self) -> bool {
        self.bits == 0
    }

    pub fn dot(self, other: GfVector) -> Result<bool> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(dot_bits(self.bits, other.bits))
    }

    pub fn xor(self, other: GfVector) -> Result<GfVector> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(GfVector {
            bits: self.bits ^ other.bits,
            n: self.n,
        })
    }
}

impl fmt::Debug for GfVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GfVector({:#x}/{})", self.bits, self.n)
    }
}

/// Dot product of two vectors of equal dimension.
pub fn dot(x: GfVector, u: GfVector) -> Result<bool> {
    x.dot(u)
}

/// A codimension-`d` affine subspace of `F_2^n` in canonical constraint form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AffineSubspace {
    n: u8,
    /// RREF rows, sorted by pivot (lowest set bit) ascending.
    normals: Vec<u32>,
    /// Bit `i` is the right-hand side of row `i`.
    rhs: u32,
}

/// Outcome of bringing a constraint system to canonical form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Canonical {
    Subspace(AffineSubspace),
    /// The system has no solution.
    Empty,
    /// The constraints are consistent but linearly dependent.
    Degenerate,
}

impl Canonical {
    pub fn into_subspace(self) -> Result<AffineSubspace> {
        match self {
            Canonical::Subspace(s) => Ok(s),
            Canonical::Empty => Err(Error::Empty),
            Canonical::Degenerate => Err(Error::Degenerate),
        }
    }
}

/// Reduces `rows` (normal, rhs) in place to RREF with lowest-bit pivots.
/// Returns the rank of the normal part; rows beyond the rank have zero
/// normals and are left at the end.
fn rref(rows: &mut [(u32, bool)]) -> usize {
    let mut rank = 0;
    for col in 0..32 {
        let bit = 1u32 << col;
        let Some(pos) = (rank..rows.len()).find(|&i| rows[i].0 & bit != 0) else {
            continue;
        };
        rows.swap(rank, pos);
        let pivot = rows[rank];
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && row.0 & bit != 0 {
                row.0 ^= pivot.0;
                row.1 ^= pivot.1;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// RREF of `rows` truncated to its rank. `None` if the system is inconsistent.
pub(crate) fn reduce_rows(mut rows: Vec<(u32, bool)>) -> Option<Vec<(u32, bool)>> {
    let rank = rref(&mut rows);
    if rows[rank..].iter().any(|r| r.1) {
        return None;
    }
    rows.truncate(rank);
    Some(rows)
}

/// Canonicalizes the system `{x : x·normals[i] = rhs[i]}`.
pub fn canonicalize(normals: &[GfVector], rhs: &[bool]) -> Result<Canonical> {
    let Some(first) = normals.first() else {
        return Err(Error::InvalidParameters(
            "at least one constraint is required".into(),
        ));
    };
    if normals.len() != rhs.len() {
        return Err(Error::InvalidParameters(
            "normals and rhs differ in length".into(),
        ));
    }
    let n = first.dim();
    let mut rows = Vec::with_capacity(normals.len());
    for (u, &c) in normals.iter().zip(rhs) {
        if u.dim() != n {
            return Err(Error::DimensionMismatch {
                left: n,
                right: u.dim(),
            });
        }
        rows.push((u.bits(), c));
    }
    Ok(AffineSubspace::canonical_from_rows(n, rows))
}

impl AffineSubspace {
    /// Canonicalizes raw `(normal mask, rhs)` rows of width `n`.
    pub fn from_rows(n: u8, rows: &[(u32, bool)]) -> Result<Canonical> {
        let n = check_dim(n as u32)?;
        if rows.is_empty() {
            return Err(Error::InvalidParameters(
                "at least one constraint is required".into(),
            ));
        }
        for &(u, _) in rows {
            if u & !full_mask(n) != 0 {
                return Err(Error::MaskOutOfRange { mask: u, n });
            }
        }
        Ok(Self::canonical_from_rows(n, rows.to_vec()))
    }

    pub(crate) fn canonical_from_rows(n: u8, mut rows: Vec<(u32, bool)>) -> Canonical {
        let rank = rref(&mut rows);
        if rows[rank..].iter().any(|r| r.1) {
            return Canonical::Empty;
        }
        if rank < rows.len() {
            return Canonical::Degenerate;
        }
        let rhs = rows
            .iter()
            .enumerate()
            .fold(0u32, |acc, (i, r)| acc | ((r.1 as u32) << i));
        Canonical::Subspace(AffineSubspace {
            n,
            normals: rows.into_iter().map(|r| r.0).collect(),
            rhs,
        })
    }

    /// Like [`AffineSubspace::from_rows`] but treats anything other than a
    /// full-rank consistent system as an error.
    pub fn from_rows_strict(n: u8, rows: &[(u32, bool)]) -> Result<Self> {
        Self::from_rows(n, rows)?.into_subspace()
    }

    /// `{x : x·u = c}` for a nonzero mask `u`.
    pub fn hyperplane(n: u8, u: u32, c: bool) -> Result<Self> {
        Self::from_rows_strict(n, &[(u, c)])
    }

    /// The single point `p`, as a codimension-`n` subspace.
    pub fn point(n: u8, p: u32) -> Result<Self> {
        let n = check_dim(n as u32)?;
        let rows: Vec<(u32, bool)> = (0..n).map(|i| (1u32 << i, p >> i & 1 == 1)).collect();
        Self::from_rows_strict(n, &rows)
    }

    #[inline]
    pub fn ambient_dim(&self) -> u8 {
        self.n
    }

    #[inline]
    pub fn codim(&self) -> u8 {
        self.normals.len() as u8
    }

    pub fn normals(&self) -> &[u32] {
        &self.normals
    }

    /// Right-hand sides packed with bit `i` belonging to row `i`.
    pub fn rhs_bits(&self) -> u32 {
        self.rhs
    }

    pub fn rows(&self) -> impl Iterator<Item = (u32, bool)> + '_ {
        self.normals
            .iter()
            .enumerate()
            .map(move |(i, &u)| (u, self.rhs >> i & 1 == 1))
    }

    #[inline]
    pub fn contains_bits(&self, x: u32) -> bool {
        self.rows().all(|(u, c)| dot_bits(x, u) == c)
    }

    pub fn contains(&self, x: GfVector) -> Result<bool> {
        if x.dim() != self.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: x.dim(),
            });
        }
        Ok(self.contains_bits(x.bits()))
    }

    pub fn contains_origin(&self) -> bool {
        self.rhs == 0
    }

    /// Number of points, `2^(n-d)`.
    pub fn size(&self) -> u64 {
        1u64 << (self.n - self.codim())
    }

    fn pivots(&self) -> u32 {
        self.normals
            .iter()
            .fold(0, |acc, &u| acc | (u & u.wrapping_neg()))
    }

    /// The point obtained by setting every free coordinate to zero.
    pub fn base_point(&self) -> u32 {
        self.rows()
            .filter(|r| r.1)
            .fold(0, |acc, (u, _)| acc | (u & u.wrapping_neg()))
    }

    /// A basis of the direction space (the solutions of the homogeneous system).
    pub fn direction_basis(&self) -> Vec<u32> {
        let pivots = self.pivots();
        let free = full_mask(self.n) & !pivots;
        (0..self.n)
            .filter(|&j| free >> j & 1 == 1)
            .map(|j| {
                let bit = 1u32 << j;
                self.normals
                    .iter()
                    .filter(|&&u| u & bit != 0)
                    .fold(bit, |acc, &u| acc | (u & u.wrapping_neg()))
            })
            .collect()
    }

    /// All `2^(n-d)` points in increasing mask order.
    pub fn points(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.size() as usize);
        self.for_each_point(|x| out.push(x));
        out.sort_unstable();
        out
    }

    /// Visits every point in Gray-code order (not sorted).
    pub fn for_each_point(&self, mut f: impl FnMut(u32)) {
        let basis = self.direction_basis();
        let mut x = self.base_point();
        f(x);
        let total = 1u64 << basis.len();
        for i in 1..total {
            x ^= basis[i.trailing_zeros() as usize];
            f(x);
        }
    }

    /// Canonical byte encoding: `n`, `d`, then one big-endian word
    /// `(normal << 1) | rhs` per row.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(2 + 4 * self.normals.len());
        out.push(self.n);
        out.push(self.codim());
        for (u, c) in self.rows() {
            out.extend_from_slice(&((u << 1) | c as u32).to_be_bytes());
        }
        out
    }

    fn row_words(&self) -> impl Iterator<Item = u32> + '_ {
        self.rows().map(|(u, c)| (u << 1) | c as u32)
    }
}

impl Ord for AffineSubspace {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.n, self.codim())
            .cmp(&(other.n, other.codim()))
            .then_with(|| self.row_words().cmp(other.row_words()))
    }
}

impl PartialOrd for AffineSubspace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for AffineSubspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AffineSubspace(n={}, ", self.n)?;
        let mut first = true;
        for (u, c) in self.rows() {
            if !first {
                f.write_str(", ")?;
            }
            first = false;
            write!(f, "x·{u:#x}={}", c as u8)?;
        }
        f.write_str(")")
    }
}

/// The points of `s` as vectors, in increasing mask order.
pub fn enumerate_points(s: &AffineSubspace) -> Vec<GfVector> {
    s.points()
        .into_iter()
        .map(|bits| GfVector { bits, n: s.n })
        .collect()
}

/// Number of `d`-dimensional linear subspaces of `F_2^n`.
pub fn gaussian_binomial(n: u32, d: u32) -> u128 {
    if d > n {
        return 0;
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..d {
        num *= (1u128 << (n - i)) - 1;
        den *= (1u128 << (i + 1)) - 1;
    }
    num / den
}

/// Number of codimension-`d` affine subspaces of `F_2^n`.
pub fn affine_subspace_count(n: u32, d: u32) -> u128 {
    gaussian_binomial(n, d) << d
}

/// Every codimension-`d` affine subspace of `F_2^n`, canonical and sorted.
///
/// Fails with [`Error::ResourceLimit`] when the count exceeds `limit`.
pub fn enumerate_subspaces(n: u8, d: u8, limit: u128) -> Result<Vec<AffineSubspace>> {
    let n = check_dim(n as u32)?;
    if d == 0 || d > n {
        return Err(Error::InvalidParameters(alloc::format!(
            "codimension {d} outside 1..={n}"
        )));
    }
    let count = affine_subspace_count(n as u32, d as u32);
    if count > limit {
        return Err(Error::ResourceLimit { count, limit });
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut pivots = Vec::with_capacity(d as usize);
    let mut rows = alloc::vec![0u32; d as usize];
    rref_shapes(n, d, 0, &mut pivots, &mut |pivots| {
        // Free positions of row i: non-pivot columns above its pivot.
        let pivot_mask = pivots.iter().fold(0u32, |a, &p| a | (1 << p));
        let free: Vec<Vec<u8>> = pivots
            .iter()
            .map(|&p| (p + 1..n).filter(|c| pivot_mask >> c & 1 == 0).collect())
            .collect();
        let total_free: u32 = free.iter().map(|f| f.len() as u32).sum();
        for assignment in 0u64..(1u64 << total_free) {
            let mut shift = 0;
            for (i, cols) in free.iter().enumerate() {
                let mut row = 1u32 << pivots[i];
                for &c in cols {
                    if assignment >> shift & 1 == 1 {
                        row |= 1 << c;
                    }
                    shift += 1;
                }
                rows[i] = row;
            }
            for rhs in 0u32..(1u32 << d) {
                out.push(AffineSubspace {
                    n,
                    normals: rows.clone(),
                    rhs,
                });
            }
        }
    });
    out.sort_unstable();
    Ok(out)
}

fn rref_shapes(n: u8, d: u8, start: u8, pivots: &mut Vec<u8>, f: &mut impl FnMut(&[u8])) {
    if pivots.len() == d as usize {
        f(pivots);
        return;
    }
    let remaining = d - pivots.len() as u8;
    for p in start..=(n - remaining) {
        pivots.push(p);
        rref_shapes(n, d, p + 1, pivots, f);
        pivots.pop();
    }
}
