//! Binary linear codes as hyperplane covers.
//!
//! A code here is given by the `m × n` matrix `A` whose rows are the normals
//! `u_1, …, u_m`; the codeword of a message `x ∈ F_2^n` is
//! `(x·u_1, …, x·u_m)`. This is the transpose of the usual generator-matrix
//! convention: rows of `A` are *columns* of a textbook generator matrix.
//!
//! A row `u_i` is the hyperplane `H_{u_i} = {x : x·u_i = 1}`, and `x` is
//! covered exactly as many times as its codeword has ones. So the hyperplanes
//! form a `(k, 1; 0)`-cover iff the code has minimum distance at least `k`.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::One;

use crate::cover::{ConstructionTag, Cover, Family};
use crate::error::{Error, Result};
use crate::gf2::{self, full_mask, AffineSubspace};

/// Largest message dimension [`LinearCode::min_distance`] will enumerate.
pub const MAX_DISTANCE_DIM: u8 = 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCode {
    dim: u8,
    rows: Vec<u32>,
}

impl LinearCode {
    pub fn new(dim: u8, rows: Vec<u32>) -> Result<Self> {
        let dim = gf2::check_dim(dim as u32)?;
        for &u in &rows {
            if u & !full_mask(dim) != 0 {
                return Err(Error::MaskOutOfRange { mask: u, n: dim });
            }
        }
        Ok(Self { dim, rows })
    }

    pub fn dim(&self) -> u8 {
        self.dim
    }

    /// Code length `m`.
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[u32] {
        &self.rows
    }

    /// Codeword bits of message `x`, packed into 64-bit words.
    pub fn encode(&self, x: u32) -> Vec<u64> {
        let mut out = vec![0u64; self.rows.len().div_ceil(64).max(1)];
        for (i, &u) in self.rows.iter().enumerate() {
            if gf2::dot_bits(x, u) {
                out[i / 64] |= 1 << (i % 64);
            }
        }
        out
    }

    /// Columns of `A` as bitsets over the `m` positions: column `j` holds
    /// bit `j` of every row.
    fn columns(&self) -> Vec<Vec<u64>> {
        let words = self.rows.len().div_ceil(64).max(1);
        (0..self.dim)
            .map(|j| {
                let mut col = vec![0u64; words];
                for (i, &u) in self.rows.iter().enumerate() {
                    if u >> j & 1 == 1 {
                        col[i / 64] |= 1 << (i % 64);
                    }
                }
                col
            })
            .collect()
    }

    /// Minimum weight of a nonzero codeword; 0 if the rows do not span.
    ///
    /// Walks all nonzero messages in Gray-code order, updating the codeword
    /// by one column per step.
    pub fn min_distance(&self) -> Result<u32> {
        self.min_distance_in(1, 1u64 << self.dim)
    }

    /// Minimum codeword weight over Gray-code indices `start..end`
    /// (message `i ^ (i >> 1)`). Index 0, the zero message, is skipped.
    pub fn min_distance_in(&self, start: u64, end: u64) -> Result<u32> {
        if self.dim > MAX_DISTANCE_DIM {
            return Err(Error::InvalidParameters(alloc::format!(
                "min_distance enumerates 2^{} messages; cap is 2^{MAX_DISTANCE_DIM}",
                self.dim
            )));
        }
        let end = end.min(1u64 << self.dim);
        let start = start.max(1);
        if start >= end {
            return Ok(u32::MAX);
        }
        let columns = self.columns();
        let gray = |i: u64| (i ^ (i >> 1)) as u32;
        let mut word = self.encode(gray(start));
        let weight = |w: &[u64]| w.iter().map(|x| x.count_ones()).sum::<u32>();
        let mut best = weight(&word);
        for i in start + 1..end {
            let col = &columns[i.trailing_zeros() as usize];
            for (w, c) in word.iter_mut().zip(col) {
                *w ^= c;
            }
            best = best.min(weight(&word));
            if best == 0 {
                break;
            }
        }
        Ok(best)
    }

    /// Minimum distance by direct encoding of every message; slow reference.
    pub fn min_distance_direct(&self) -> Result<u32> {
        if self.dim > MAX_DISTANCE_DIM {
            return Err(Error::InvalidParameters("dimension over cap".into()));
        }
        Ok((1u32..1 << self.dim)
            .map(|x| self.rows.iter().filter(|&&u| gf2::dot_bits(x, u)).count() as u32)
            .min()
            .unwrap_or(0))
    }

    /// Whether `2^dim · Σ_{i ≤ t} C(len, i) ≤ 2^len` with `t = floor((dist-1)/2)`.
    pub fn satisfies_hamming_bound(&self, distance: u32) -> bool {
        hamming_packing_holds(self.dim as u32, self.rows.len() as u32, distance)
    }
}

/// The sphere-packing inequality for `2^dim` codewords of length `len` at
/// minimum distance `distance`.
pub fn hamming_packing_holds(dim: u32, len: u32, distance: u32) -> bool {
    let t = distance.saturating_sub(1) / 2;
    let mut ball = BigUint::one();
    let mut binom = BigUint::one();
    for i in 1..=t.min(len) {
        binom = binom * BigUint::from(len - i + 1) / BigUint::from(i);
        ball += &binom;
    }
    (ball << dim as u64) <= (BigUint::one() << len as u64)
}

/// The code of a `(k, 1; 0)`-cover: one row per hyperplane (with multiplicity).
pub fn code_from_cover(cover: &Cover) -> Result<LinearCode> {
    if cover.codim() != 1 {
        return Err(Error::CodimensionMismatch {
            expected: 1,
            found: cover.codim(),
        });
    }
    if cover.origin_count() > 0 {
        return Err(Error::InvalidParameters(alloc::format!(
            "cover passes through the origin {} times; only origin-avoiding hyperplanes have the form u·x = 1",
            cover.origin_count()
        )));
    }
    let rows = cover.expanded().map(|s| s.normals()[0]).collect();
    LinearCode::new(cover.ambient_dim(), rows)
}

/// The hyperplanes `u_i·x = 1` of a code; a `(d_min, 1; 0)`-cover.
pub fn cover_from_code(code: &LinearCode) -> Result<Cover> {
    if let Some(i) = code.rows.iter().position(|&u| u == 0) {
        return Err(Error::ZeroRow(i));
    }
    let mut cover = Cover::new(code.dim, 1)?;
    for &u in &code.rows {
        cover.insert(AffineSubspace::hyperplane(code.dim, u, true)?, 1)?;
    }
    Ok(cover)
}

/// Quadratic residues modulo 11.
const QR11: [u32; 5] = [1, 3, 4, 5, 9];

/// The extended binary Golay code `[24, 12, 8]` in row form.
///
/// The generator is `[I_12 | B]` with `B` the bordered circulant
/// `[[0, 1ᵀ], [1, C]]`, where `C` is the 11×11 circulant whose entry
/// `(i, j)` is 1 iff `j - i mod 11` is 0 or a quadratic residue. The 24 rows
/// returned are the generator's columns.
pub fn golay_generator() -> LinearCode {
    let circulant = |i: u32, j: u32| {
        let t = (j + 11 - i) % 11;
        t == 0 || QR11.contains(&t)
    };
    let b = |r: u32, c: u32| -> bool {
        match (r, c) {
            (0, 0) => false,
            (0, _) | (_, 0) => true,
            _ => circulant(r - 1, c - 1),
        }
    };
    let mut rows: Vec<u32> = (0..12).map(|i| 1u32 << i).collect();
    for c in 0..12 {
        rows.push(
            (0..12)
                .filter(|&r| b(r, c))
                .fold(0, |acc, r| acc | (1 << r)),
        );
    }
    LinearCode { dim: 12, rows }
}

/// The size-24 `(8, 1; 0)`-cover of `F_2^12` given by the Golay code.
pub fn golay_cover() -> Result<Cover> {
    Ok(
        cover_from_code(&golay_generator())?.with_tag(ConstructionTag {
            family: Family::GolayCover,
            n: 12,
            k: 8,
            d: 1,
            s: Some(0),
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct;

    #[test]
    fn golay_parameters() {
        let g = golay_generator();
        assert_eq!((g.dim(), g.len()), (12, 24));
        assert_eq!(g.len() - g.dim() as usize, 12);
        assert_eq!(g.min_distance().unwrap(), 8);
        let c = golay_cover().unwrap();
        assert_eq!(c.size(), 24);
        let r = c.verify(8);
        assert!(r.is_cover());
        assert_eq!(r.origin_count, 0);
        assert_eq!(r.min_nonzero, 8);
    }

    #[test]
    fn identity_code() {
        for n in 1..=8u8 {
            let code = LinearCode::new(n, (0..n).map(|i| 1 << i).collect()).unwrap();
            assert_eq!(code.min_distance().unwrap(), 1);
            assert!(cover_from_code(&code).unwrap().verify(1).is_cover());
        }
    }

    #[test]
    fn lemma31_base_is_parity_extended_identity() {
        for n in 2..=7 {
            let cover = construct::lemma31_cover(n, 2, 1).unwrap();
            let code = code_from_cover(&cover).unwrap();
            assert_eq!(code.len(), n as usize + 1);
            assert_eq!(code.min_distance().unwrap(), 2);
        }
    }

    #[test]
    fn gray_code_matches_direct() {
        let code =
            LinearCode::new(7, vec![1, 2, 4, 8, 16, 32, 64, 127, 85, 51, 0x1f, 0x60]).unwrap();
        assert_eq!(
            code.min_distance().unwrap(),
            code.min_distance_direct().unwrap()
        );
        let long = LinearCode::new(5, (0..70).map(|i| (i % 31) + 1).collect()).unwrap();
        assert_eq!(
            long.min_distance().unwrap(),
            long.min_distance_direct().unwrap()
        );
    }

    #[test]
    fn non_spanning_rows_have_distance_zero() {
        let code = LinearCode::new(3, vec![1, 2, 3]).unwrap();
        assert_eq!(code.min_distance().unwrap(), 0);
    }

    #[test]
    fn repetition_rows() {
        let code = LinearCode::new(1, vec![1; 5]).unwrap();
        let cover = cover_from_code(&code).unwrap();
        assert_eq!(cover.entries().len(), 1);
        assert!(cover.verify(5).is_cover());
        assert_eq!(code.min_distance().unwrap(), 5);
    }

    #[test]
    fn errors() {
        assert_eq!(
            cover_from_code(&LinearCode::new(3, vec![1, 0]).unwrap()),
            Err(Error::ZeroRow(1))
        );
        let through_origin = construct::diagonal_cover(5).unwrap();
        assert!(code_from_cover(&through_origin).is_err());
        assert!(LinearCode::new(3, vec![8]).is_err());
    }

    #[test]
    fn hamming_packing() {
        let g = golay_generator();
        assert!(g.satisfies_hamming_bound(8));
        // The perfect [23,12,7] Golay code meets it with equality.
        assert!(hamming_packing_holds(12, 23, 7));
        assert!(!hamming_packing_holds(12, 22, 7));
    }
}
