//! Explicit cover families.
//!
//! Every constructor returns a [`Cover`] tagged with its family; sizes match
//! the closed forms in [`crate::bounds`], which the tests check through the
//! verifier.

use alloc::format;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cover::{ConstructionTag, Cover, Family};
use crate::error::{Error, Result};
use crate::exact::LogExpr;
use crate::gf2::{self, full_mask, AffineSubspace};

/// Normal used for parallel-pair padding unless overridden: `e_1`.
pub const DEFAULT_PAD_NORMAL: u32 = 1;

fn invalid(msg: alloc::string::String) -> Error {
    Error::InvalidParameters(msg)
}

fn tag(family: Family, n: u8, k: u32, d: u8, s: Option<u32>) -> ConstructionTag {
    ConstructionTag { family, n, k, d, s }
}

fn check_nd(n: u8, d: u8) -> Result<()> {
    gf2::check_dim(n as u32)?;
    if d == 0 || d > n {
        return Err(invalid(format!("need n >= d >= 1, got n={n}, d={d}")));
    }
    Ok(())
}

/// Adds `pairs` parallel pairs with normal `u` to a hyperplane cover.
pub fn pad_parallel(cover: &Cover, pairs: u32, u: u32) -> Result<Cover> {
    if cover.codim() != 1 {
        return Err(Error::CodimensionMismatch {
            expected: 1,
            found: cover.codim(),
        });
    }
    let n = cover.ambient_dim();
    let mut out = cover.clone();
    if pairs > 0 {
        out.insert(AffineSubspace::hyperplane(n, u, false)?, pairs)?;
        out.insert(AffineSubspace::hyperplane(n, u, true)?, pairs)?;
    }
    Ok(out)
}

/// `H_u = {x : x·u = 1}`.
fn avoiding_hyperplane(n: u8, u: u32) -> Result<AffineSubspace> {
    AffineSubspace::hyperplane(n, u, true)
}

/// Optimal cover in the large-multiplicity regime `k >= 2^(n-d-1)`, of size
/// `2^d·k - floor(k / 2^(n-d))`.
pub fn thm_a_cover(n: u8, k: u32, d: u8) -> Result<Cover> {
    check_nd(n, d)?;
    let threshold = if n - d >= 1 { 1u64 << (n - d - 1) } else { 1 };
    if k == 0 || (k as u64) < threshold {
        return Err(invalid(format!(
            "thm_a_cover needs k >= 2^(n-d-1) = {threshold}, got k={k}"
        )));
    }
    if d >= 2 {
        let inner = thm_a_cover(n - d + 1, k, 1)?;
        return Ok(reduce_d(&inner, n, k, d)?.with_tag(tag(Family::ThmA, n, k, d, None)));
    }
    let half = 1u64 << (n - 1);
    let mut cover = Cover::new(n, 1)?;
    if n >= 2 && (k as u64) < half {
        // k in [2^(n-2), 2^(n-1)): all H_u with u_n = 1, then pad.
        for low in 0..1u32 << (n - 1) {
            cover.insert(avoiding_hyperplane(n, low | (1 << (n - 1)))?, 1)?;
        }
        cover = pad_parallel(&cover, k - (1u32 << (n - 2)), DEFAULT_PAD_NORMAL)?;
    } else {
        let a = (k as u64 / half) as u32;
        let b = (k as u64 % half) as u32;
        for u in 1..=full_mask(n) {
            cover.insert(avoiding_hyperplane(n, u)?, a)?;
        }
        cover = pad_parallel(&cover, b, DEFAULT_PAD_NORMAL)?;
    }
    Ok(cover.with_tag(tag(Family::ThmA, n, k, d, None)))
}

/// The general upper-bound family of size `n + 2^d·k - d - 2` (for `k >= 2`).
///
/// For `d = 1` this is `{H_{e_i}} ∪ {H_1}` plus `k - 2` parallel pairs, a
/// `(k, 1; k-2)`-cover.
pub fn lemma31_cover(n: u8, k: u32, d: u8) -> Result<Cover> {
    check_nd(n, d)?;
    if k < 2 {
        return Err(invalid(format!("lemma31_cover needs k >= 2, got {k}")));
    }
    if d >= 2 {
        let inner = lemma31_cover(n - d + 1, k, 1)?;
        return Ok(reduce_d(&inner, n, k, d)?.with_tag(tag(Family::Lemma31, n, k, d, Some(k - 2))));
    }
    let mut cover = Cover::new(n, 1)?;
    for i in 0..n {
        cover.insert(avoiding_hyperplane(n, 1 << i)?, 1)?;
    }
    cover.insert(avoiding_hyperplane(n, full_mask(n))?, 1)?;
    let cover = pad_parallel(&cover, k - 2, DEFAULT_PAD_NORMAL)?;
    Ok(cover.with_tag(tag(Family::Lemma31, n, k, 1, Some(k - 2))))
}

/// Lifts a `(k, 1; s)`-cover of `F_2^(n-d+1)` to a `(k, d; s)`-cover of `F_2^n`
/// with `2k(2^(d-1) - 1)` extra subspaces.
///
/// `S_0 = {x : x_1 = … = x_(d-1) = 0}`; each nonzero prefix `t` gives a translate
/// of `S_0`, split in two along `x_d`, taken `k` times. The inner cover lives in
/// `S_0` with coordinates `(x_d, …, x_n)`.
pub fn reduce_d(inner: &Cover, n: u8, k: u32, d: u8) -> Result<Cover> {
    check_nd(n, d)?;
    if d < 2 {
        return Err(invalid("reduce_d needs d >= 2".into()));
    }
    let inner_n = n - d + 1;
    if inner.ambient_dim() != inner_n || inner.codim() != 1 {
        return Err(Error::NotACover(format!(
            "inner cover must be a hyperplane cover of F_2^{inner_n}, got codim {} in F_2^{}",
            inner.codim(),
            inner.ambient_dim()
        )));
    }
    let report = inner.verify(k);
    if !report.is_cover() {
        return Err(Error::NotACover(format!(
            "inner cover is not a ({k},1)-cover"
        )));
    }
    let prefix_bits = d - 1;
    let mut out = Cover::new(n, d)?;
    for t in 1u32..(1 << prefix_bits) {
        for b in [false, true] {
            let mut rows: Vec<(u32, bool)> = (0..prefix_bits)
                .map(|i| (1u32 << i, t >> i & 1 == 1))
                .collect();
            rows.push((1 << prefix_bits, b));
            out.insert_rows(&rows, k)?;
        }
    }
    for (s, m) in inner.entries() {
        let mut rows: Vec<(u32, bool)> = (0..prefix_bits).map(|i| (1u32 << i, false)).collect();
        rows.extend(s.rows().map(|(u, c)| (u << prefix_bits, c)));
        out.insert_rows(&rows, *m)?;
    }
    Ok(out.with_tag(tag(
        Family::ReduceD,
        n,
        k,
        d,
        Some(report.origin_count as u32),
    )))
}

/// Extends a cover of `F_2^n` to `F_2^(n+1)` with one extra subspace.
///
/// Every subspace keeps its constraints (the new coordinate is free), and
/// `S_0 = {x_(n+1) = 1, x_1 = … = x_(d-1) = 0}` covers `(0, …, 0, 1)`.
///
/// `(0, …, 0, 1)` ends up covered `s + 1` times, so the result is a
/// `(k, d; k-1)`-cover exactly when the input is one; other inputs are
/// transformed all the same and the caller checks the result.
pub fn lift(cover: &Cover) -> Result<Cover> {
    let n = cover.ambient_dim();
    let d = cover.codim();
    let n1 = gf2::check_dim(n as u32 + 1)?;
    let mut out = Cover::new(n1, d)?;
    for (s, m) in cover.entries() {
        let rows: Vec<(u32, bool)> = s.rows().collect();
        out.insert_rows(&rows, *m)?;
    }
    let mut rows: Vec<(u32, bool)> = (0..d - 1).map(|i| (1u32 << i, false)).collect();
    rows.push((1 << n, true));
    out.insert_rows(&rows, 1)?;
    let mut t = cover.tag().unwrap_or(tag(Family::Lift, n, 0, d, None));
    t.family = Family::Lift;
    t.n = n1;
    Ok(out.with_tag(t))
}

/// A `(k, d; k-1)`-cover of size `n + 2^d·k - d - 1`: the points of `F_2^d`
/// (each nonzero point `k` times, the origin `k - 1` times) lifted `n - d` times.
pub fn smax_cover(n: u8, k: u32, d: u8) -> Result<Cover> {
    check_nd(n, d)?;
    if k == 0 {
        return Err(invalid("smax_cover needs k >= 1".into()));
    }
    let mut cover = Cover::new(d, d)?;
    for p in 0..1u32 << d {
        let mult = if p == 0 { k - 1 } else { k };
        cover.insert(AffineSubspace::point(d, p)?, mult)?;
    }
    for _ in d..n {
        cover = lift(&cover)?;
    }
    Ok(cover.with_tag(tag(Family::SMax, n, k, d, Some(k - 1))))
}

/// A `k`-cover of `F_2^k` of size `3k - 4` covering the origin `k - 4` times.
pub fn diagonal_cover(k: u32) -> Result<Cover> {
    if k < 4 {
        return Err(invalid(format!("diagonal_cover needs k >= 4, got {k}")));
    }
    let n = gf2::check_dim(k)?;
    let ones = full_mask(n);
    let mut cover = Cover::new(n, 1)?;
    for i in 0..n {
        cover.insert(avoiding_hyperplane(n, 1 << i)?, 1)?;
        cover.insert(avoiding_hyperplane(n, ones ^ (1 << i))?, 1)?;
    }
    cover.insert(AffineSubspace::hyperplane(n, ones, false)?, k - 4)?;
    Ok(cover.with_tag(tag(Family::Diagonal, n, k, 1, Some(k - 4))))
}

/// Initial sample size for [`gv_random_cover`]: `n + ceil((k-1)·log2(2n))`.
pub fn gv_initial_size(n: u8, k: u32) -> u32 {
    let extra = LogExpr::new(0, k.saturating_sub(1), 2 * n as u64, 1).ceil();
    n as u32 + extra as u32
}

/// Samples origin-avoiding hyperplanes `H_u` with uniform nonzero `u` until the
/// family is a `(k, 1; 0)`-cover.
///
/// Starts at [`gv_initial_size`] and grows the sample by one after every
/// `ceil(max_tries / 4)` consecutive failures. Deterministic in `seed`.
pub fn gv_random_cover(n: u8, k: u32, seed: u64, max_tries: u32) -> Result<Cover> {
    let n = gf2::check_dim(n as u32)?;
    if k == 0 {
        return Err(invalid("gv_random_cover needs k >= 1".into()));
    }
    if max_tries == 0 {
        return Err(Error::Exhausted { tries: 0 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let patience = max_tries.div_ceil(4);
    let mut m = gv_initial_size(n, k);
    let top = full_mask(n);
    for attempt in 0..max_tries {
        if attempt > 0 && attempt % patience == 0 {
            m += 1;
        }
        let mut cover = Cover::new(n, 1)?;
        for _ in 0..m {
            let u = rng.gen_range(1..=top);
            cover.insert(avoiding_hyperplane(n, u)?, 1)?;
        }
        if cover.verify(k).is_cover() {
            return Ok(cover.with_tag(tag(Family::GvRandom, n, k, 1, Some(0))));
        }
    }
    Err(Error::Exhausted { tries: max_tries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds;

    fn assert_cover(c: &Cover, k: u32, size: u64) -> u64 {
        let r = c.verify(k);
        assert!(r.is_cover(), "{:?} not a {k}-cover: {r:?}", c.tag());
        assert_eq!(c.size(), size, "{:?}", c.tag());
        r.origin_count
    }

    #[test]
    fn thm_a_examples() {
        assert_cover(&thm_a_cover(3, 4, 1).unwrap(), 4, 7);
        assert_cover(&thm_a_cover(3, 16, 1).unwrap(), 16, 28);
        let c = thm_a_cover(3, 2, 1).unwrap();
        assert_eq!(assert_cover(&c, 2, 4), 0);
        assert!(c
            .entries()
            .iter()
            .all(|(s, m)| *m == 1 && s.normals()[0] & 0b100 != 0 && !s.contains_origin()));
        assert!(thm_a_cover(4, 3, 1).is_err());
    }

    #[test]
    fn thm_a_meets_double_count_bound() {
        for n in 2..=6u8 {
            for d in 1..n {
                let lo = 1u32 << (n - d - 1);
                for k in lo..=lo * 2 + 3 {
                    let c = thm_a_cover(n, k, d).unwrap();
                    let expected = bounds::lb_double_count(n, k, d, 0).unwrap();
                    assert_cover(&c, k, expected);
                }
            }
        }
    }

    #[test]
    fn lemma31_examples() {
        assert_cover(&lemma31_cover(5, 3, 1).unwrap(), 3, 8);
        for n in 1..=6 {
            let c = lemma31_cover(n, 2, 1).unwrap();
            assert_eq!(assert_cover(&c, 2, n as u64 + 1), 0);
        }
        let c = lemma31_cover(6, 3, 2).unwrap();
        assert_eq!(assert_cover(&c, 3, 14), 1);
        assert!(lemma31_cover(4, 1, 1).is_err());
    }

    #[test]
    fn reduce_d_size_and_origin() {
        let inner = lemma31_cover(3, 2, 1).unwrap();
        let out = reduce_d(&inner, 4, 2, 2).unwrap();
        assert_eq!(assert_cover(&out, 2, 8), 0);
        for (n, k, d) in [(5, 3, 2), (6, 2, 3), (6, 4, 3), (7, 3, 3)] {
            let inner = lemma31_cover(n - d + 1, k, 1).unwrap();
            let out = reduce_d(&inner, n, k, d).unwrap();
            let s_in = inner.verify(k).origin_count;
            let expected = inner.size() + 2 * k as u64 * ((1 << (d - 1)) - 1);
            assert_eq!(assert_cover(&out, k, expected), s_in);
        }
        let not_a_cover = Cover::new(3, 1).unwrap();
        assert!(matches!(
            reduce_d(&not_a_cover, 4, 2, 2),
            Err(Error::NotACover(_))
        ));
    }

    #[test]
    fn reduce_d_embedding_is_constraint_append() {
        let inner = lemma31_cover(3, 2, 1).unwrap();
        let out = reduce_d(&inner, 5, 2, 3).unwrap();
        for (s, _) in inner.entries() {
            let (u, c) = s.rows().next().unwrap();
            let embedded =
                AffineSubspace::from_rows_strict(5, &[(1, false), (2, false), (u << 2, c)])
                    .unwrap();
            assert!(out.entries().iter().any(|(e, _)| e == &embedded));
        }
    }

    #[test]
    fn lift_examples() {
        let base = smax_cover(2, 2, 2).unwrap();
        assert_eq!(base.size(), 7);
        let lifted = lift(&base).unwrap();
        assert_eq!(lifted.size(), 8);
        assert_eq!(assert_cover(&lifted, 2, 8), 1);

        // With s < k-1 the new point e_{n+1} is only hit s+1 times.
        let c = lemma31_cover(3, 2, 1).unwrap();
        let l = lift(&c).unwrap();
        assert_eq!(l.size(), 5);
        assert_eq!(l.coverage_counts()[1 << 3], 1);
        assert!(!l.verify(2).is_cover());
        let c = lemma31_cover(3, 3, 1).unwrap();
        assert_eq!(c.origin_count(), 1);
        let counts = lift(&c).unwrap().coverage_counts();
        assert_eq!(counts[1 << 3], 2);
        assert!(counts[1..]
            .iter()
            .enumerate()
            .all(|(i, &m)| i + 1 == 8 || m >= 3));
    }

    #[test]
    fn smax_examples() {
        let c = smax_cover(1, 2, 1).unwrap();
        assert_eq!(assert_cover(&c, 2, 3), 1);
        assert_eq!(assert_cover(&smax_cover(4, 2, 1).unwrap(), 2, 6), 1);
        assert_eq!(assert_cover(&smax_cover(3, 1, 1).unwrap(), 1, 3), 0);
        for n in 1..=6u8 {
            for d in 1..=n.min(3) {
                for k in 1..=4 {
                    let c = smax_cover(n, k, d).unwrap();
                    let size = bounds::g_smax_formula(n, k, d).unwrap();
                    assert_eq!(assert_cover(&c, k, size), k as u64 - 1);
                }
            }
        }
    }

    #[test]
    fn diagonal_examples() {
        for (k, size) in [(4, 8), (5, 11), (6, 14), (7, 17), (8, 20)] {
            let c = diagonal_cover(k).unwrap();
            assert_eq!(assert_cover(&c, k, size), k as u64 - 4);
        }
        assert!(diagonal_cover(3).is_err());
    }

    #[test]
    fn gv_sampler_small_cases() {
        let c = gv_random_cover(6, 1, 7, 40).unwrap();
        assert_eq!(c.verify(1).origin_count, 0);
        assert!(c.size() >= 6);
        let a = gv_random_cover(8, 3, 11, 200).unwrap();
        let b = gv_random_cover(8, 3, 11, 200).unwrap();
        assert_eq!(a, b);
        assert_eq!(gv_initial_size(12, 3), 12 + 10);
    }

    #[test]
    fn pad_rejects_higher_codimension() {
        let c = smax_cover(3, 2, 2).unwrap();
        assert!(pad_parallel(&c, 1, 1).is_err());
    }
}
