//! Closed-form bounds on `f(n, k, d)` and `g(n, k, d; s)`, and a ledger of
//! `[lo, hi]` intervals closed under the recursions between cells.
//!
//! All decisions are made in integers; logarithmic terms go through
//! [`LogExpr`] and are rounded only when merged into an interval.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::cover::Family;
use crate::error::{Error, Result};
use crate::exact::LogExpr;

fn check(n: u8, k: u32, d: u8) -> Result<()> {
    if d == 0 || d > n || n > crate::gf2::MAX_DIM {
        return Err(Error::InvalidParameters(format!(
            "need 24 >= n >= d >= 1, got n={n}, d={d}"
        )));
    }
    if k == 0 {
        return Err(Error::InvalidParameters("need k >= 1".into()));
    }
    Ok(())
}

/// `2^e` if it fits in a `u64`.
fn pow2(e: u64) -> Option<u64> {
    if e < 64 {
        Some(1u64 << e)
    } else {
        None
    }
}

/// Double-counting lower bound `2^d·k - floor((k - s) / 2^(n-d))` on
/// `g(n, k, d; s)`; with `s = 0` it bounds `f(n, k, d)`.
pub fn lb_double_count(n: u8, k: u32, d: u8, s: u32) -> Result<u64> {
    check(n, k, d)?;
    if s >= k {
        return Err(Error::InvalidParameters(format!(
            "need k > s, got k={k}, s={s}"
        )));
    }
    Ok(((k as u64) << d) - ((k - s) as u64 >> (n - d)))
}

/// `f(n, k, d) = 2^d·k - floor(k / 2^(n-d))` when `k >= 2^(n-d-1)`.
pub fn exact_thm_a(n: u8, k: u32, d: u8) -> Option<u64> {
    check(n, k, d).ok()?;
    let regime = n == d || k as u64 >= 1u64 << (n - d - 1);
    regime.then(|| lb_double_count(n, k, d, 0).unwrap())
}

/// The general upper bound `n + 2^d·k - d - 2`, valid for `k >= 2`.
pub fn ub_general(n: u8, k: u32, d: u8) -> Result<u64> {
    check(n, k, d)?;
    if k < 2 {
        return Err(Error::InvalidParameters(
            "the general upper bound needs k >= 2".into(),
        ));
    }
    Ok(n as u64 + ((k as u64) << d) - d as u64 - 2)
}

/// Whether `n > 2^(2^d·k - d - k + 1)`, the large-dimension regime in which
/// `f(n, k, d) = n + 2^d·k - d - 2`.
pub fn large_dimension_regime(n: u8, k: u32, d: u8) -> bool {
    let e = ((k as u64) << d) + 1 - d as u64 - k as u64;
    pow2(e).is_some_and(|t| n as u64 > t)
}

/// Which rule produced the lower end of [`bounds_thm_bc`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BcLower {
    LargeDimension,
    LogGap,
    DoubleCount,
}

/// `(lo, hi)` from the large-dimension and intermediate regimes (`k >= 2`).
///
/// `hi = n + 2^d·k - d - 2`. `lo = hi` when `n > 2^(2^d·k - d - k + 1)`;
/// otherwise `lo = ceil(n + 2^d·k - d - log2(2k))` when
/// `n >= floor(log2 k) + d + 1`; otherwise the double-count bound.
pub fn bounds_thm_bc(n: u8, k: u32, d: u8) -> Option<(u64, u64, BcLower)> {
    check(n, k, d).ok()?;
    if k < 2 {
        return None;
    }
    let hi = ub_general(n, k, d).ok()?;
    if large_dimension_regime(n, k, d) {
        return Some((hi, hi, BcLower::LargeDimension));
    }
    let log_k = 31 - k.leading_zeros();
    if n as u32 > log_k + d as u32 {
        // ceil(A - log2(2k)) = A - floor(log2(2k)) = A - log_k - 1.
        let lo = n as u64 + ((k as u64) << d) - d as u64 - log_k as u64 - 1;
        return Some((lo, hi, BcLower::LogGap));
    }
    Some((lb_double_count(n, k, d, 0).ok()?, hi, BcLower::DoubleCount))
}

/// Sphere-packing lower bound on `g(n, k, 1; 0)`:
/// `n + floor((k-1)/2) · log2(2n / (k-1))`, kept exact.
pub fn lb_hamming_s0(n: u8, k: u32) -> Result<LogExpr> {
    if n == 0 || k < 2 {
        return Err(Error::InvalidParameters(format!(
            "need n >= 1 and k >= 2, got n={n}, k={k}"
        )));
    }
    Ok(LogExpr::new(
        n as i64,
        (k - 1) / 2,
        2 * n as u64,
        (k - 1) as u64,
    ))
}

/// `g(n, k, d; k-1) = n + 2^d·k - d - 1`.
pub fn g_smax_formula(n: u8, k: u32, d: u8) -> Result<u64> {
    check(n, k, d)?;
    Ok(n as u64 + ((k as u64) << d) - d as u64 - 1)
}

/// `f(n, 1, d) = n + 2^d - d - 1`.
pub fn jamison(n: u8, d: u8) -> Result<u64> {
    g_smax_formula(n, 1, d)
}

/// `f(n, k, n) = k(2^n - 1)`: covering with single points.
pub fn point_cover_value(n: u8, k: u32) -> Result<u64> {
    check(n, k, n)?;
    Ok(k as u64 * ((1u64 << n) - 1))
}

/// Minimum number of times an optimal `(k, d)`-cover must pass through the
/// origin: `k - 2` in the large-dimension regime, else 0.
pub fn origin_mult_floor(n: u8, k: u32, d: u8) -> u32 {
    if k >= 2 && large_dimension_regime(n, k, d) {
        k - 2
    } else {
        0
    }
}

/// The chain ruling out covers through the origin at most `k - 3` times:
/// dropping `k - 3` subspaces and extending the rest to hyperplanes leaves a
/// `(3, 1; 0)`-cover, so such a cover has size at least
/// `ceil(lb_hamming_s0(n, 3)) + k - 3`. Returns that size when it exceeds the
/// general upper bound, i.e. when the chain forces `s >= k - 2`.
pub fn hamming_origin_chain(n: u8, k: u32, d: u8) -> Option<u64> {
    check(n, k, d).ok()?;
    if k < 3 {
        return None;
    }
    let forced = lb_hamming_s0(n, 3).ok()?.ceil() as u64 + k as u64 - 3;
    (forced > ub_general(n, k, d).ok()?).then_some(forced)
}

/// Why a bound holds.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Rule {
    DoubleCount,
    ThmA,
    ThmB,
    ThmC,
    Hamming,
    Jamison,
    Points,
    NRecursion,
    KRecursionLo,
    KRecursionHi,
    ReduceD,
    Construction(Family),
    Anchor(String),
}

impl Rule {
    pub fn label(&self) -> String {
        match self {
            Rule::Construction(f) => format!("Construction({})", f.name()),
            Rule::Anchor(src) => format!("Anchor({src})"),
            other => format!("{other:?}"),
        }
    }
}

/// An externally supplied fact about `f(n, k, d)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Anchor {
    pub n: u8,
    pub k: u32,
    pub d: u8,
    pub lo: Option<u64>,
    pub hi: Option<u64>,
    pub source: String,
}

impl Anchor {
    pub fn exact(n: u8, k: u32, d: u8, value: u64, source: impl Into<String>) -> Self {
        Self {
            n,
            k,
            d,
            lo: Some(value),
            hi: Some(value),
            source: source.into(),
        }
    }

    pub fn upper(n: u8, k: u32, d: u8, value: u64, source: impl Into<String>) -> Self {
        Self {
            n,
            k,
            d,
            lo: None,
            hi: Some(value),
            source: source.into(),
        }
    }

    pub fn lower(n: u8, k: u32, d: u8, value: u64, source: impl Into<String>) -> Self {
        Self {
            n,
            k,
            d,
            lo: Some(value),
            hi: None,
            source: source.into(),
        }
    }
}

/// The interval known for one cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundEntry {
    pub n: u8,
    pub k: u32,
    pub d: u8,
    pub lo: u64,
    pub hi: u64,
    pub lo_provenance: Vec<Rule>,
    pub hi_provenance: Vec<Rule>,
}

impl BoundEntry {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    /// Exact and equal to `n + 2^d·k - d - 2`.
    pub fn attains_general_upper(&self) -> bool {
        self.is_exact() && ub_general(self.n, self.k, self.d).is_ok_and(|u| u == self.lo)
    }
}

/// Cells `d <= n <= n_max`, `1 <= k <= k_max` for each listed `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rect {
    pub n_max: u8,
    pub k_max: u32,
    pub codims: Vec<u8>,
}

impl Rect {
    pub fn hyperplanes(n_max: u8, k_max: u32) -> Self {
        Self {
            n_max,
            k_max,
            codims: alloc::vec![1],
        }
    }
}

type Cell = (u8, u8, u32); // (d, n, k)

/// `f(a) >= f(b) + offset`.
#[derive(Clone, Debug)]
struct Edge {
    a: Cell,
    b: Cell,
    offset: i64,
    rule: Rule,
}

/// Intervals for every cell of a [`Rect`], closed under the recursions.
#[derive(Clone, Debug)]
pub struct BoundLedger {
    rect: Rect,
    cells: BTreeMap<Cell, BoundEntry>,
    anchors: Vec<Anchor>,
    edges: Vec<Edge>,
}

impl BoundLedger {
    /// Builds the ledger for `rect` from the closed forms, the constructions
    /// and `anchors`, then closes it. Anchors outside the rectangle are
    /// ignored.
    pub fn propagate(rect: &Rect, anchors: &[Anchor]) -> Result<Self> {
        let mut codims = rect.codims.clone();
        codims.sort_unstable();
        codims.dedup();
        let rect = Rect {
            n_max: rect.n_max,
            k_max: rect.k_max,
            codims,
        };
        if rect.codims.is_empty() || rect.k_max == 0 {
            return Err(Error::InvalidParameters("empty rectangle".into()));
        }
        let mut cells = BTreeMap::new();
        for &d in &rect.codims {
            for n in d..=rect.n_max {
                for k in 1..=rect.k_max {
                    check(n, k, d)?;
                    let (lo, hi) = rule_bounds(n, k, d);
                    let lo_v = lo.iter().map(|r| r.1).max().unwrap();
                    let hi_v = hi.iter().map(|r| r.1).min().unwrap();
                    cells.insert(
                        (d, n, k),
                        BoundEntry {
                            n,
                            k,
                            d,
                            lo: lo_v,
                            hi: hi_v,
                            lo_provenance: Vec::new(),
                            hi_provenance: Vec::new(),
                        },
                    );
                }
            }
        }
        let mut ledger = Self {
            edges: build_edges(&rect, &cells),
            rect,
            cells,
            anchors: Vec::new(),
        };
        for a in anchors {
            ledger.apply_anchor(a);
        }
        ledger.close()?;
        Ok(ledger)
    }

    fn apply_anchor(&mut self, a: &Anchor) {
        let Some(e) = self.cells.get_mut(&(a.d, a.n, a.k)) else {
            return;
        };
        if let Some(lo) = a.lo {
            e.lo = e.lo.max(lo);
        }
        if let Some(hi) = a.hi {
            e.hi = e.hi.min(hi);
        }
        self.anchors.push(a.clone());
    }

    /// Adds a fact and re-closes the ledger.
    pub fn add_anchor(&mut self, anchor: Anchor) -> Result<()> {
        self.apply_anchor(&anchor);
        self.close()?;
        Ok(())
    }

    /// Runs the recursions to a fixpoint and refreshes provenance. Returns
    /// whether any interval changed.
    pub fn close(&mut self) -> Result<bool> {
        let mut changed_any = false;
        loop {
            let mut changed = false;
            for e in &self.edges {
                let (a_lo, a_hi) = self.interval(e.a);
                let (b_lo, b_hi) = self.interval(e.b);
                let new_a_lo = b_lo as i64 + e.offset;
                if new_a_lo > a_lo as i64 {
                    self.cells.get_mut(&e.a).unwrap().lo = new_a_lo as u64;
                    changed = true;
                }
                let new_b_hi = a_hi as i64 - e.offset;
                if new_b_hi < b_hi as i64 {
                    if new_b_hi < 0 {
                        return Err(self.contradiction(e.b, 0));
                    }
                    self.cells.get_mut(&e.b).unwrap().hi = new_b_hi as u64;
                    changed = true;
                }
            }
            if let Some((&cell, _)) = self.cells.iter().find(|(_, e)| e.lo > e.hi) {
                return Err(self.contradiction(cell, self.cells[&cell].hi));
            }
            if !changed {
                break;
            }
            changed_any = true;
        }
        self.refresh_provenance();
        Ok(changed_any)
    }

    fn contradiction(&self, (d, n, k): Cell, hi: u64) -> Error {
        let lo = self.cells[&(d, n, k)].lo;
        Error::Contradiction { n, k, d, lo, hi }
    }

    fn interval(&self, cell: Cell) -> (u64, u64) {
        let e = &self.cells[&cell];
        (e.lo, e.hi)
    }

    fn refresh_provenance(&mut self) {
        let mut lo_tags: BTreeMap<Cell, Vec<Rule>> = BTreeMap::new();
        let mut hi_tags: BTreeMap<Cell, Vec<Rule>> = BTreeMap::new();
        for (&cell, e) in &self.cells {
            let (lo, hi) = rule_bounds(e.n, e.k, e.d);
            lo_tags.insert(
                cell,
                lo.into_iter()
                    .filter(|r| r.1 == e.lo)
                    .map(|r| r.0)
                    .collect(),
            );
            hi_tags.insert(
                cell,
                hi.into_iter()
                    .filter(|r| r.1 == e.hi)
                    .map(|r| r.0)
                    .collect(),
            );
        }
        for a in &self.anchors {
            let cell = (a.d, a.n, a.k);
            let e = &self.cells[&cell];
            if a.lo == Some(e.lo) {
                lo_tags
                    .get_mut(&cell)
                    .unwrap()
                    .push(Rule::Anchor(a.source.clone()));
            }
            if a.hi == Some(e.hi) {
                hi_tags
                    .get_mut(&cell)
                    .unwrap()
                    .push(Rule::Anchor(a.source.clone()));
            }
        }
        for edge in &self.edges {
            let (a_lo, a_hi) = self.interval(edge.a);
            let (b_lo, b_hi) = self.interval(edge.b);
            if b_lo as i64 + edge.offset == a_lo as i64 {
                lo_tags.get_mut(&edge.a).unwrap().push(edge.rule.clone());
            }
            if a_hi as i64 - edge.offset == b_hi as i64 {
                hi_tags.get_mut(&edge.b).unwrap().push(edge.rule.clone());
            }
        }
        for (cell, e) in self.cells.iter_mut() {
            let mut lo = lo_tags.remove(cell).unwrap_or_default();
            lo.sort();
            lo.dedup();
            let mut hi = hi_tags.remove(cell).unwrap_or_default();
            hi.sort();
            hi.dedup();
            e.lo_provenance = lo;
            e.hi_provenance = hi;
        }
    }

    pub fn get(&self, n: u8, k: u32, d: u8) -> Option<&BoundEntry> {
        self.cells.get(&(d, n, k))
    }

    pub fn entries(&self) -> impl Iterator<Item = &BoundEntry> + '_ {
        self.cells.values()
    }

    pub fn rect(&self) -> &Rect {
        &self.rect
    }

    pub fn anchors(&self) -> &[Anchor] {
        &self.anchors
    }
}

/// Bounds with the rule that gives each.
pub type RuleBounds = Vec<(Rule, u64)>;

/// Every closed-form and construction bound that applies to one cell, with
/// its rule: `(lower bounds, upper bounds)`. Parameters must be valid.
pub fn rule_bounds(n: u8, k: u32, d: u8) -> (RuleBounds, RuleBounds) {
    let mut lo = alloc::vec![(Rule::DoubleCount, lb_double_count(n, k, d, 0).unwrap())];
    let mut hi = alloc::vec![(
        Rule::Construction(Family::SMax),
        g_smax_formula(n, k, d).unwrap()
    )];
    if let Some(v) = exact_thm_a(n, k, d) {
        lo.push((Rule::ThmA, v));
        hi.push((Rule::ThmA, v));
    }
    if k == 1 {
        let v = jamison(n, d).unwrap();
        lo.push((Rule::Jamison, v));
        hi.push((Rule::Jamison, v));
    }
    if n == d {
        let v = point_cover_value(n, k).unwrap();
        lo.push((Rule::Points, v));
        hi.push((Rule::Points, v));
    }
    if let Some((l, h, how)) = bounds_thm_bc(n, k, d) {
        hi.push((Rule::Construction(Family::Lemma31), h));
        match how {
            BcLower::LargeDimension => lo.push((Rule::ThmB, l)),
            BcLower::LogGap => lo.push((Rule::ThmC, l)),
            BcLower::DoubleCount => {}
        }
    }
    if hamming_origin_chain(n, k, d).is_some() {
        // Optimal covers pass through the origin at least k-2 times, so
        // f >= g(n, k, d; k-1) - 1.
        lo.push((Rule::Hamming, g_smax_formula(n, k, d).unwrap() - 1));
    }
    if d == 1 && k >= 4 && n as u32 == k {
        hi.push((Rule::Construction(Family::Diagonal), 3 * k as u64 - 4));
    }
    if d == 1 && n == 12 && k == 8 {
        hi.push((Rule::Construction(Family::GolayCover), 24));
    }
    (lo, hi)
}

fn build_edges(rect: &Rect, cells: &BTreeMap<Cell, BoundEntry>) -> Vec<Edge> {
    let mut edges = Vec::new();
    for &(d, n, k) in cells.keys() {
        if n > d {
            edges.push(Edge {
                a: (d, n, k),
                b: (d, n - 1, k),
                offset: 1,
                rule: Rule::NRecursion,
            });
        }
        if k >= 2 {
            edges.push(Edge {
                a: (d, n, k),
                b: (d, n, k - 1),
                offset: 1,
                rule: Rule::KRecursionLo,
            });
            // A partition of F_2^n into 2^d translates raises every count by one.
            edges.push(Edge {
                a: (d, n, k - 1),
                b: (d, n, k),
                offset: -(1i64 << d),
                rule: Rule::KRecursionHi,
            });
        }
        if d >= 2 && rect.codims.contains(&1) {
            let inner = (1, n - d + 1, k);
            if cells.contains_key(&inner) {
                let extra = 2 * k as i64 * ((1i64 << (d - 1)) - 1);
                edges.push(Edge {
                    a: inner,
                    b: (d, n, k),
                    offset: -extra,
                    rule: Rule::ReduceD,
                });
            }
        }
    }
    edges
}

/// Threshold status for one `k` (hyperplane case).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum N0Status {
    /// `n0(k)` is determined.
    Exact(u8),
    /// `at_least <= n0(k) <= at_most`; `at_most` is `None` when no cell in
    /// the ledger is known to attain `n + 2k - 3`.
    Bounded { at_least: u8, at_most: Option<u8> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct N0Report {
    pub k: u32,
    pub status: N0Status,
    /// Largest `n` whose upper bound is below `n + 2k - 3`.
    pub last_below: Option<u8>,
    /// Least `n` known to equal `n + 2k - 3`.
    pub first_tight: Option<u8>,
}

/// Where `f(n, k, 1)` starts to equal `n + 2k - 3`, as far as the ledger knows.
pub fn n0_report(k: u32, ledger: &BoundLedger) -> Result<N0Report> {
    if k < 2 || !ledger.rect.codims.contains(&1) || k > ledger.rect.k_max {
        return Err(Error::InvalidParameters(format!(
            "ledger has no hyperplane column for k={k}"
        )));
    }
    let mut last_below = None;
    let mut first_tight = None;
    for n in 1..=ledger.rect.n_max {
        let e = &ledger.cells[&(1, n, k)];
        let tight = ub_general(n, k, 1)?;
        if e.hi < tight {
            last_below = Some(n);
        }
        if first_tight.is_none() && e.lo == tight {
            first_tight = Some(n);
        }
    }
    let at_least = last_below.map_or(1, |n| n + 1);
    let status = match first_tight {
        Some(t) if t == at_least => N0Status::Exact(t),
        other => N0Status::Bounded {
            at_least,
            at_most: other,
        },
    };
    Ok(N0Report {
        k,
        status,
        last_below,
        first_tight,
    })
}
