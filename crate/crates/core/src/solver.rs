//! Exact minimum covers by depth-first branch and bound.
//!
//! Each node picks the deficient point with the least slack (usable copies
//! through it minus its deficiency; ties: larger deficiency, then lowest
//! mask) and branches on which candidate through that point is used first,
//! in canonical order. Branch `i` forbids candidates `1..i` through the
//! point for its whole subtree, so every multiset is reached at most once. A node is pruned when `chosen`
//! plus a lower bound on the subspaces still needed reaches the incumbent;
//! the bound is the largest of the maximum deficiency,
//! `ceil(total deficiency / 2^(n-d))` and a greedy packing bound over the
//! usable candidates.
//!
//! No cover needs more than `k` copies of a subspace (drop one and every
//! count stays at least `k`), so multiplicities are capped at `k`.

use alloc::vec;
use alloc::vec::Vec;

use crate::bounds;
use crate::code;
use crate::construct;
use crate::cover::{ConstructionTag, Cover, Family};
use crate::error::{Error, Result};
use crate::gf2::{self, AffineSubspace};

pub const DEFAULT_NODE_BUDGET: u64 = 50_000_000_000;
pub const DEFAULT_CANDIDATE_LIMIT: u128 = 1 << 16;

/// How often the stop callback is polled, in nodes.
const POLL_INTERVAL: u64 = 1 << 12;

/// Constraint on how often the origin is covered.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OriginConstraint {
    /// At most `k - 1` times, i.e. any `(k, d)`-cover.
    Any,
    /// Exactly `s` times.
    Exact(u32),
}

/// Restrictions a caller may opt into. They narrow the search space and are
/// echoed in the result.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Assumption {
    /// Only covers through the origin at least this many times. Accepted
    /// only up to [`bounds::origin_mult_floor`].
    OriginAtLeast(u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchProblem {
    pub n: u8,
    pub k: u32,
    pub d: u8,
    pub origin: OriginConstraint,
}

impl SearchProblem {
    pub fn f(n: u8, k: u32, d: u8) -> Self {
        Self {
            n,
            k,
            d,
            origin: OriginConstraint::Any,
        }
    }

    pub fn g(n: u8, k: u32, d: u8, s: u32) -> Self {
        Self {
            n,
            k,
            d,
            origin: OriginConstraint::Exact(s),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub node_budget: u64,
    /// Seed the incumbent with the best applicable construction.
    pub seed_construction: bool,
    /// For `d = 1`, fix one copy of each `{x_i = 1}` before searching.
    pub basis_reduction: bool,
    pub assumptions: Vec<Assumption>,
    /// Refuse candidate pools larger than this.
    pub candidate_limit: u128,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            node_budget: DEFAULT_NODE_BUDGET,
            seed_construction: true,
            basis_reduction: true,
            assumptions: Vec::new(),
            candidate_limit: DEFAULT_CANDIDATE_LIMIT,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveStatus {
    /// The certificate is minimum under the recorded assumptions.
    Optimal,
    /// Budget hit; the certificate is the best found.
    Feasible,
    /// The search space holds no cover.
    Infeasible,
    /// Budget hit before any cover was found.
    Unknown,
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub problem: SearchProblem,
    pub status: SolveStatus,
    pub value: Option<u64>,
    pub certificate: Option<Cover>,
    pub nodes: u64,
    /// Lower bound in force at the root.
    pub proof_lo: u64,
    pub assumptions: Vec<Assumption>,
    pub basis_reduction: bool,
}

#[derive(Clone, Debug)]
pub enum Decision {
    Yes(Cover),
    No,
    /// Budget hit without an answer.
    Unknown,
}

/// Origin coverage window `[lo, hi]` implied by the constraint and assumptions.
fn origin_window(p: &SearchProblem, opts: &SolveOptions) -> Result<(u32, u32)> {
    let (mut lo, hi) = match p.origin {
        OriginConstraint::Any => (0, p.k - 1),
        OriginConstraint::Exact(s) => (s, s),
    };
    for a in &opts.assumptions {
        match *a {
            Assumption::OriginAtLeast(t) => {
                let floor = bounds::origin_mult_floor(p.n, p.k, p.d);
                if t > floor {
                    return Err(Error::InvalidParameters(alloc::format!(
                        "OriginAtLeast({t}) is not justified for n={}, k={}, d={} (provable floor {floor})",
                        p.n,
                        p.k,
                        p.d
                    )));
                }
                lo = lo.max(t);
            }
        }
    }
    if lo > hi {
        return Err(Error::InvalidParameters(alloc::format!(
            "origin window [{lo}, {hi}] is empty"
        )));
    }
    Ok((lo, hi))
}

fn validate(p: &SearchProblem) -> Result<()> {
    if p.d == 0 || p.d > p.n || p.n > gf2::MAX_DIM {
        return Err(Error::InvalidParameters(alloc::format!(
            "need 24 >= n >= d >= 1, got n={}, d={}",
            p.n,
            p.d
        )));
    }
    if p.k == 0 {
        return Err(Error::InvalidParameters("need k >= 1".into()));
    }
    if let OriginConstraint::Exact(s) = p.origin {
        if s >= p.k {
            return Err(Error::InvalidParameters(alloc::format!(
                "need s < k, got s={s}, k={}",
                p.k
            )));
        }
    }
    Ok(())
}

fn admissible(c: &Cover, k: u32, lo: u32, hi: u32) -> bool {
    let r = c.verify(k);
    r.is_cover_for(k) && (lo as u64..=hi as u64).contains(&r.origin_count)
}

/// Constructions that satisfy the problem, smallest first.
pub fn seed_covers(p: &SearchProblem, lo: u32, hi: u32) -> Vec<Cover> {
    let (n, k, d) = (p.n, p.k, p.d);
    let mut out: Vec<Cover> = Vec::new();
    let mut push = |c: Result<Cover>| {
        if let Ok(c) = c {
            if admissible(&c, k, lo, hi) {
                out.push(c);
            }
        }
    };
    if bounds::exact_thm_a(n, k, d).is_some() {
        push(construct::thm_a_cover(n, k, d));
    }
    if k >= 2 {
        push(construct::lemma31_cover(n, k, d));
    }
    push(construct::smax_cover(n, k, d));
    if d == 1 && n as u32 == k && k >= 4 {
        push(construct::diagonal_cover(k));
    }
    if (n, k, d) == (12, 8, 1) {
        push(code::golay_cover());
    }
    // k copies of a (1, d; 0)-cover plus s subspaces through the origin.
    if lo <= hi {
        push(stacked_cover(n, k, d, lo));
    }
    out.sort_by_key(|c| c.size());
    out
}

fn stacked_cover(n: u8, k: u32, d: u8, s: u32) -> Result<Cover> {
    let base = construct::smax_cover(n, 1, d)?;
    let mut out = Cover::new(n, d)?;
    for (sub, m) in base.entries() {
        out.insert(sub.clone(), m * k)?;
    }
    let rows: Vec<(u32, bool)> = (0..d).map(|i| (1u32 << i, false)).collect();
    out.insert_rows(&rows, s)?;
    Ok(out.with_tag(ConstructionTag {
        family: Family::SMax,
        n,
        k,
        d,
        s: Some(s),
    }))
}

/// Closed-form lower bound for the problem's origin window.
fn root_bound(p: &SearchProblem, lo: u32) -> u64 {
    bounds::lb_double_count(p.n, p.k, p.d, lo).unwrap_or(0)
}

/// Minimum cover size under `problem`.
pub fn solve_min(problem: &SearchProblem, opts: &SolveOptions) -> Result<SolveResult> {
    solve_min_with(problem, opts, &mut || false)
}

/// [`solve_min`] that also stops when `stop` returns true; polled every few
/// thousand nodes.
pub fn solve_min_with(
    problem: &SearchProblem,
    opts: &SolveOptions,
    stop: &mut dyn FnMut() -> bool,
) -> Result<SolveResult> {
    validate(problem)?;
    let (lo, hi) = origin_window(problem, opts)?;
    let proof_lo = root_bound(problem, lo);
    let incumbent = if opts.seed_construction {
        seed_covers(problem, lo, hi).into_iter().next()
    } else {
        None
    };
    let mut result = SolveResult {
        problem: problem.clone(),
        status: SolveStatus::Optimal,
        value: incumbent.as_ref().map(Cover::size),
        certificate: incumbent,
        nodes: 0,
        proof_lo,
        assumptions: opts.assumptions.clone(),
        basis_reduction: false,
    };
    if result.value == Some(proof_lo) {
        return Ok(result);
    }
    let mut search = Search::new(problem, lo, hi, opts)?;
    result.basis_reduction = search.presets > 0;
    search.target = result.value.unwrap_or(u64::MAX);
    let proof_lo = proof_lo.max(search.root_bound());
    result.proof_lo = proof_lo;
    search.run(stop);
    result.nodes = search.nodes;
    if let Some(found) = search.best_cover(problem)? {
        result.value = Some(found.size());
        result.certificate = Some(found);
    }
    result.status = match (search.aborted, result.value) {
        (false, Some(_)) => SolveStatus::Optimal,
        (false, None) => SolveStatus::Infeasible,
        (true, Some(_)) => SolveStatus::Feasible,
        (true, None) => SolveStatus::Unknown,
    };
    Ok(result)
}

/// Is there a cover of size at most `m`?
pub fn decide(problem: &SearchProblem, m: u64, opts: &SolveOptions) -> Result<Decision> {
    decide_with(problem, m, opts, &mut || false)
}

pub fn decide_with(
    problem: &SearchProblem,
    m: u64,
    opts: &SolveOptions,
    stop: &mut dyn FnMut() -> bool,
) -> Result<Decision> {
    validate(problem)?;
    let (lo, hi) = origin_window(problem, opts)?;
    if m < root_bound(problem, lo) {
        return Ok(Decision::No);
    }
    if opts.seed_construction {
        if let Some(c) = seed_covers(problem, lo, hi)
            .into_iter()
            .find(|c| c.size() <= m)
        {
            return Ok(Decision::Yes(c));
        }
    }
    let mut search = Search::new(problem, lo, hi, opts)?;
    search.target = m + 1;
    search.first_only = true;
    search.run(stop);
    if let Some(c) = search.best_cover(problem)? {
        return Ok(Decision::Yes(c));
    }
    Ok(if search.aborted {
        Decision::Unknown
    } else {
        Decision::No
    })
}

/// `g(n, k, d; s)`.
pub fn solve_g(n: u8, k: u32, d: u8, s: u32, opts: &SolveOptions) -> Result<SolveResult> {
    solve_min(&SearchProblem::g(n, k, d, s), opts)
}

#[derive(Clone, Debug)]
struct Bitset(Vec<u64>);

impl Bitset {
    fn new(len: usize) -> Self {
        Self(vec![0; len.div_ceil(64)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }
}

struct Search<'a> {
    k: u32,
    block: u64,
    pool: Vec<AffineSubspace>,
    points_of: Vec<Vec<u32>>,
    /// Per candidate, its points as a bitset.
    point_sets: Vec<Bitset>,
    /// Per point, the candidates containing it.
    through: Vec<Bitset>,
    contains_origin: Vec<bool>,
    demand: Vec<u32>,
    origin_hi: u32,
    count: Vec<u32>,
    mult: Vec<u32>,
    chosen: Vec<usize>,
    total_deficit: u64,
    origin_count: u32,
    presets: usize,
    target: u64,
    best: Option<Vec<usize>>,
    first_only: bool,
    nodes: u64,
    budget: u64,
    aborted: bool,
    stop: Option<&'a mut dyn FnMut() -> bool>,
}

impl<'a> Search<'a> {
    fn new(p: &SearchProblem, origin_lo: u32, origin_hi: u32, opts: &SolveOptions) -> Result<Self> {
        let pool = gf2::enumerate_subspaces(p.n, p.d, opts.candidate_limit)?;
        let npoints = 1usize << p.n;
        let mut through = vec![Bitset::new(pool.len()); npoints];
        let mut points_of = Vec::with_capacity(pool.len());
        let mut point_sets = Vec::with_capacity(pool.len());
        for (i, s) in pool.iter().enumerate() {
            let pts = s.points();
            let mut set = Bitset::new(npoints);
            for &x in &pts {
                through[x as usize].set(i);
                set.set(x as usize);
            }
            points_of.push(pts);
            point_sets.push(set);
        }
        let mut demand = vec![p.k; npoints];
        demand[0] = origin_lo;
        let mut search = Self {
            k: p.k,
            block: 1 << (p.n - p.d),
            contains_origin: pool.iter().map(AffineSubspace::contains_origin).collect(),
            total_deficit: demand.iter().map(|&x| x as u64).sum(),
            pool,
            points_of,
            point_sets,
            through,
            demand,
            origin_hi,
            count: vec![0; npoints],
            mult: Vec::new(),
            chosen: Vec::new(),
            origin_count: 0,
            presets: 0,
            target: u64::MAX,
            best: None,
            first_only: false,
            nodes: 0,
            budget: opts.node_budget,
            aborted: false,
            stop: None,
        };
        search.mult = vec![0; search.pool.len()];
        if opts.basis_reduction && p.d == 1 {
            // The normals of the origin-avoiding hyperplanes span F_2^n (a
            // nonzero point orthogonal to all of them could only be covered by
            // hyperplanes through the origin), and GL(n, 2) preserves covers,
            // so some optimal cover contains every {x_i = 1}.
            for i in 0..p.n {
                let h = AffineSubspace::hyperplane(p.n, 1 << i, true)?;
                let idx = search
                    .pool
                    .binary_search(&h)
                    .map_err(|_| Error::Degenerate)?;
                search.add(idx);
            }
            search.presets = p.n as usize;
        }
        Ok(search)
    }

    fn add(&mut self, c: usize) {
        for &x in &self.points_of[c] {
            let x = x as usize;
            if self.count[x] < self.demand[x] {
                self.total_deficit -= 1;
            }
            self.count[x] += 1;
        }
        self.mult[c] += 1;
        if self.contains_origin[c] {
            self.origin_count += 1;
        }
        self.chosen.push(c);
    }

    fn remove(&mut self) {
        let c = self.chosen.pop().expect("remove on empty stack");
        for &x in &self.points_of[c] {
            let x = x as usize;
            self.count[x] -= 1;
            if self.count[x] < self.demand[x] {
                self.total_deficit += 1;
            }
        }
        self.mult[c] -= 1;
        if self.contains_origin[c] {
            self.origin_count -= 1;
        }
    }

    fn root_bound(&self) -> u64 {
        let max_def = (0..self.count.len())
            .map(|x| self.demand[x].saturating_sub(self.count[x]))
            .max()
            .unwrap_or(0);
        let forbidden = Bitset::new(self.pool.len());
        self.chosen.len() as u64 + (max_def as u64).max(self.packing_bound(max_def, &forbidden))
    }

    /// Fewest further subspaces whose best possible contributions add up to
    /// the total deficit. The `j`-th extra copy of a candidate can only help
    /// points still short by at least `j`.
    fn packing_bound(&self, max_def: u32, forbidden: &Bitset) -> u64 {
        let words = self.count.len().div_ceil(64);
        let mut levels = vec![Bitset(vec![0; words]); max_def as usize];
        for x in 0..self.count.len() {
            let def = self.demand[x].saturating_sub(self.count[x]);
            for level in levels.iter_mut().take(def as usize) {
                level.set(x);
            }
        }
        let mut buckets = vec![0u64; self.block as usize + 1];
        for c in 0..self.pool.len() {
            if !self.usable(c, forbidden) {
                continue;
            }
            let copies = (self.k - self.mult[c]).min(max_def);
            let cap = if self.contains_origin[c] {
                self.origin_hi - self.origin_count
            } else {
                copies
            };
            for level in levels.iter().take(copies.min(cap) as usize) {
                let gain: u32 = level
                    .0
                    .iter()
                    .zip(&self.point_sets[c].0)
                    .map(|(a, b)| (a & b).count_ones())
                    .sum();
                if gain == 0 {
                    break;
                }
                buckets[gain as usize] += 1;
            }
        }
        let mut need = self.total_deficit;
        let mut used = 0u64;
        for gain in (1..buckets.len() as u64).rev() {
            let avail = buckets[gain as usize];
            let take = need.div_ceil(gain).min(avail);
            used += take;
            need = need.saturating_sub(take * gain);
            if need == 0 {
                return used;
            }
        }
        // The usable candidates cannot absorb the deficit at all.
        u64::MAX / 2
    }

    fn usable(&self, c: usize, forbidden: &Bitset) -> bool {
        !forbidden.get(c)
            && self.mult[c] < self.k
            && !(self.contains_origin[c] && self.origin_count >= self.origin_hi)
    }

    fn run(&mut self, stop: &'a mut dyn FnMut() -> bool) {
        self.stop = Some(stop);
        let forbidden = Bitset::new(self.pool.len());
        self.dfs(&forbidden);
    }

    fn dfs(&mut self, forbidden: &Bitset) {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.aborted = true;
            return;
        }
        if self.nodes.is_multiple_of(POLL_INTERVAL) {
            if let Some(stop) = self.stop.as_mut() {
                if stop() {
                    self.aborted = true;
                    return;
                }
            }
        }
        let size = self.chosen.len() as u64;
        if self.total_deficit == 0 {
            if size < self.target {
                self.target = size;
                self.best = Some(self.chosen.clone());
            }
            return;
        }
        let mut max_def = 0;
        let mut pick: Option<(u32, u32, usize)> = None;
        for x in 0..self.count.len() {
            let def = self.demand[x].saturating_sub(self.count[x]);
            if def == 0 {
                continue;
            }
            max_def = max_def.max(def);
            let mut avail = 0u32;
            for (w, (t, f)) in self.through[x].0.iter().zip(&forbidden.0).enumerate() {
                let mut bits = t & !f;
                while bits != 0 {
                    let c = w * 64 + bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    if self.usable(c, forbidden) {
                        avail += self.k - self.mult[c];
                    }
                }
            }
            if avail < def {
                return;
            }
            let better = match pick {
                None => true,
                Some((d0, a0, _)) => avail - def < a0 - d0 || (avail - def == a0 - d0 && def > d0),
            };
            if better {
                pick = Some((def, avail, x));
            }
        }
        let mut bound = (max_def as u64).max(self.total_deficit.div_ceil(self.block));
        if size + bound >= self.target {
            return;
        }
        bound = bound.max(self.packing_bound(max_def, forbidden));
        if size + bound >= self.target {
            return;
        }
        let (_, _, p) = pick.expect("positive deficit implies a pick");
        let branches: Vec<usize> = (0..self.pool.len())
            .filter(|&c| self.through[p].get(c) && self.usable(c, forbidden))
            .collect();
        let mut child = forbidden.clone();
        for c in branches {
            self.add(c);
            self.dfs(&child);
            self.remove();
            if self.aborted || (self.first_only && self.best.is_some()) {
                return;
            }
            if size + bound >= self.target {
                return;
            }
            child.set(c);
        }
    }

    fn best_cover(&self, p: &SearchProblem) -> Result<Option<Cover>> {
        let Some(best) = &self.best else {
            return Ok(None);
        };
        let mut cover = Cover::new(p.n, p.d)?;
        for &c in best {
            cover.insert(self.pool[c].clone(), 1)?;
        }
        let s = match p.origin {
            OriginConstraint::Exact(s) => Some(s),
            OriginConstraint::Any => Some(cover.origin_count() as u32),
        };
        debug_assert!(cover.verify(p.k).is_cover_for(p.k));
        Ok(Some(cover.with_tag(ConstructionTag {
            family: Family::Search,
            n: p.n,
            k: p.k,
            d: p.d,
            s,
        })))
    }
}
