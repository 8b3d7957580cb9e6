//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any line fails.
//!
//! The long solver tier (f(6,5) and f(6,8)) only runs with `SUBCOVER_LONG=1`
//! or when the harness is invoked with `--ignored` / `--include-ignored`.
//! `SUBCOVER_BUDGET_NODES` caps its search.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_rational::Ratio;
use subcover::table::{cell_text, markdown, Window};
use subcover_core::bounds::{
    self, hamming_origin_chain, lb_double_count, lb_hamming_s0, n0_report, rule_bounds, Anchor,
    BoundLedger, N0Status, Rect, Rule,
};
use subcover_core::code::{code_from_cover, cover_from_code, golay_generator};
use subcover_core::construct;
use subcover_core::cover::Cover;
use subcover_core::exact::LogExpr;
use subcover_core::solver::{
    solve_g, solve_min, SearchProblem, SolveOptions, SolveStatus, DEFAULT_NODE_BUDGET,
};

const TABLE1: &str = include_str!("../../subcover/tests/data/table1.md");
const TABLE2: &str = include_str!("../../subcover/tests/data/table2.md");

type Outcome = Result<String, String>;

/// `(n, k) -> cell text` from a rendered markdown table.
fn parse_table(md: &str) -> BTreeMap<(u8, u32), String> {
    let mut lines = md.lines();
    let header: Vec<u32> = lines
        .next()
        .unwrap()
        .split('|')
        .map(str::trim)
        .skip(2)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().unwrap())
        .collect();
    let mut out = BTreeMap::new();
    for line in lines.skip(1) {
        let cols: Vec<&str> = line
            .split('|')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .collect();
        let n: u8 = cols[0].parse().unwrap();
        for (k, text) in header.iter().zip(&cols[1..]) {
            out.insert((n, *k), text.to_string());
        }
    }
    out
}

fn published() -> BTreeMap<(u8, u32), String> {
    let mut all = parse_table(TABLE1);
    all.extend(parse_table(TABLE2));
    all
}

fn value_of(text: &str) -> u64 {
    text.trim_end_matches('*').parse().unwrap()
}

fn long_tier() -> bool {
    std::env::var("SUBCOVER_LONG").is_ok_and(|v| v == "1")
        || std::env::args().any(|a| a == "--ignored" || a == "--include-ignored")
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    for n in 2..=8u8 {
        for d in 1..n {
            let m = 1u32 << (n - d);
            for k in m / 2..=m + 3 {
                let c = construct::thm_a_cover(n, k, d)
                    .map_err(|e| format!("thm_a_cover({n},{k},{d}): {e}"))?;
                let want = ((k as u64) << d) - (k / m) as u64;
                if !c.verify(k).is_cover_for(k) || c.size() != want {
                    return Err(format!("({n},{k},{d}): size {} want {want}", c.size()));
                }
                if lb_double_count(n, k, d, 0).unwrap() != want {
                    return Err(format!("({n},{k},{d}): double count disagrees"));
                }
                checked += 1;
            }
        }
    }
    let t = start.elapsed();
    if t > Duration::from_secs(30) {
        return Err(format!("took {t:?}"));
    }
    Ok(format!("{checked} cells in {t:.2?}"))
}

/// Cells solved in the standard tier: n=3 for k <= 16, n=4 for k <= 8, and
/// four cells at n = 5, 6.
fn standard_cells() -> Vec<(u8, u32)> {
    let mut cells: Vec<(u8, u32)> = (3..=16).map(|k| (3, k)).collect();
    cells.extend((3..=8).map(|k| (4, k)));
    cells.extend([(5, 3), (5, 4), (5, 5), (6, 3)]);
    cells
}

fn solve_cell(
    n: u8,
    k: u32,
    opts: &SolveOptions,
    limit: Option<Duration>,
) -> Result<(u64, Duration), String> {
    let start = Instant::now();
    let r = solve_min(&SearchProblem::f(n, k, 1), opts).map_err(|e| format!("f({n},{k}): {e}"))?;
    let t = start.elapsed();
    if r.status != SolveStatus::Optimal {
        return Err(format!(
            "f({n},{k}): status {:?}, best {:?}, proved >= {} after {} nodes",
            r.status, r.value, r.proof_lo, r.nodes
        ));
    }
    let v = r.value.unwrap();
    let cert = r.certificate.unwrap();
    if cert.size() != v || !cert.verify(k).is_cover_for(k) {
        return Err(format!("f({n},{k}): certificate does not check"));
    }
    if limit.is_some_and(|l| t > l) {
        return Err(format!("f({n},{k}): took {t:?}"));
    }
    Ok((v, t))
}

fn criterion_2(solved: &mut Vec<(u8, u32, u64)>) -> Outcome {
    let table = published();
    let seeded = SolveOptions::default();
    let plain = SolveOptions {
        seed_construction: false,
        ..SolveOptions::default()
    };
    let mut slowest = Duration::ZERO;
    for (n, k) in standard_cells() {
        let want = value_of(&table[&(n, k)]);
        for opts in [&seeded, &plain] {
            let (v, t) = solve_cell(n, k, opts, Some(Duration::from_secs(600)))?;
            if v != want {
                return Err(format!("f({n},{k}) = {v}, table says {want}"));
            }
            slowest = slowest.max(t);
        }
        solved.push((n, k, want));
    }
    Ok(format!(
        "{} cells, seeded and unseeded, slowest {slowest:.2?}",
        solved.len()
    ))
}

fn criterion_2_long(solved: &mut Vec<(u8, u32, u64)>) -> Outcome {
    let table = published();
    let budget = std::env::var("SUBCOVER_BUDGET_NODES")
        .ok()
        .and_then(|b| b.parse().ok());
    let opts = SolveOptions {
        node_budget: budget.unwrap_or(DEFAULT_NODE_BUDGET),
        ..SolveOptions::default()
    };
    let mut parts = Vec::new();
    let mut failed = false;
    for (n, k) in [(6u8, 5u32), (6, 8)] {
        let want = value_of(&table[&(n, k)]);
        match solve_cell(n, k, &opts, None) {
            Ok((v, t)) if v == want => {
                solved.push((n, k, v));
                parts.push(format!("f({n},{k})={v} in {t:.1?}"));
            }
            Ok((v, _)) => {
                failed = true;
                parts.push(format!("f({n},{k}) = {v}, table says {want}"));
            }
            Err(e) => {
                failed = true;
                parts.push(e);
            }
        }
    }
    if failed {
        Err(parts.join(", "))
    } else {
        Ok(parts.join(", "))
    }
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let g = golay_generator();
    if (g.dim(), g.len()) != (12, 24) {
        return Err(format!("generator is {}x{}", g.dim(), g.len()));
    }
    let dist = g.min_distance().map_err(|e| e.to_string())?;
    if dist != 8 {
        return Err(format!("min distance {dist}"));
    }
    let c = cover_from_code(&g).map_err(|e| e.to_string())?;
    let rep = c.verify(8);
    if !rep.is_cover_for(8) || rep.origin_count != 0 || c.size() != 24 || c.ambient_dim() != 12 {
        return Err(format!(
            "cover of size {} with s={}",
            c.size(),
            rep.origin_count
        ));
    }
    let t = start.elapsed();
    if t > Duration::from_secs(1) {
        return Err(format!("took {t:?}"));
    }
    Ok(format!("[24,12,8], (8,1;0)-cover of size 24 in {t:.2?}"))
}

/// Anchors from search results plus the Golay upper bound.
fn anchors_from(solved: &[(u8, u32, u64)]) -> Vec<Anchor> {
    let mut anchors: Vec<Anchor> = solved
        .iter()
        .map(|&(n, k, v)| Anchor::exact(n, k, 1, v, "solver"))
        .collect();
    anchors.push(Anchor::upper(12, 8, 1, 24, "golay"));
    anchors
}

/// Propagates the 3..12 x 3..16 rectangle and compares with the published
/// tables. Returns the mismatching cells.
fn regenerate(anchors: &[Anchor]) -> Result<(Vec<String>, Duration, BoundLedger), String> {
    let start = Instant::now();
    let ledger =
        BoundLedger::propagate(&Rect::hyperplanes(12, 16), anchors).map_err(|e| e.to_string())?;
    let t1 = markdown(
        &ledger,
        &Window {
            n_min: 3,
            n_max: 6,
            k_min: 3,
            k_max: 16,
            d: 1,
        },
    );
    let t2 = markdown(
        &ledger,
        &Window {
            n_min: 6,
            n_max: 12,
            k_min: 3,
            k_max: 10,
            d: 1,
        },
    );
    let t = start.elapsed();
    let mut got = parse_table(&t1);
    got.extend(parse_table(&t2));
    let mut bad = Vec::new();
    for (cell, text) in published() {
        if got.get(&cell) != Some(&text) {
            let have = ledger
                .get(cell.0, cell.1, 1)
                .map_or("missing".into(), cell_text);
            bad.push(format!("f({},{})={have} want {text}", cell.0, cell.1));
        }
    }
    for n in 6..=12u8 {
        let e = ledger.get(n, 8, 1).unwrap();
        if (e.lo, e.hi) != (n as u64 + 12, n as u64 + 12) {
            let tag = format!("f({n},8)=");
            if bad.iter().any(|b| b.starts_with(&tag)) {
                continue;
            }
            bad.push(format!("f({n},8)={}", cell_text(e)));
        }
    }
    let n0 = |k| {
        n0_report(k, &ledger)
            .map(|r| r.status)
            .map_err(|e| e.to_string())
    };
    if n0(4)? != N0Status::Exact(5) {
        bad.push(format!("n0(4): {:?}", n0(4)?));
    }
    if n0(5)? != N0Status::Exact(6) {
        bad.push(format!("n0(5): {:?}", n0(5)?));
    }
    match n0(8)? {
        N0Status::Bounded { at_least, .. } if at_least >= 13 => {}
        other => bad.push(format!("n0(8): {other:?}")),
    }
    Ok((bad, t, ledger))
}

fn criterion_4(solved: &[(u8, u32, u64)]) -> Outcome {
    let (bad, t, _) = regenerate(&anchors_from(solved))?;
    if !bad.is_empty() {
        return Err(format!(
            "{} cells not pinned by search + Golay alone: {}",
            bad.len(),
            bad.join(", ")
        ));
    }
    if t > Duration::from_secs(5) {
        return Err(format!("took {t:?}"));
    }
    Ok(format!("all cells and thresholds in {t:.2?}"))
}

fn criterion_4_published(solved: &[(u8, u32, u64)]) -> Outcome {
    let mut anchors = anchors_from(solved);
    anchors.extend(subcover::red_anchors().map_err(|e| e.to_string())?);
    let (bad, t, ledger) = regenerate(&anchors)?;
    if !bad.is_empty() {
        return Err(bad.join(", "));
    }
    if t > Duration::from_secs(5) {
        return Err(format!("took {t:?}"));
    }
    let cells = published().len();
    let exact = ledger
        .entries()
        .filter(|e| e.d == 1 && e.n >= 3 && e.k >= 3 && e.is_exact())
        .count();
    Ok(format!(
        "{cells} table cells and n0 facts match, {exact} exact cells, in {t:.2?}"
    ))
}

fn criterion_5() -> Outcome {
    let mut checked = 0;
    for d in 1..=3u8 {
        for n in d + 1..=8 {
            for k in 1..=5u32 {
                let c = construct::smax_cover(n, k, d)
                    .map_err(|e| format!("smax({n},{k},{d}): {e}"))?;
                let rep = c.verify(k);
                let want = n as u64 + ((k as u64) << d) - d as u64 - 1;
                if !rep.is_cover_for(k) || rep.origin_count != (k - 1) as u64 || c.size() != want {
                    return Err(format!(
                        "smax({n},{k},{d}): size {} s={}",
                        c.size(),
                        rep.origin_count
                    ));
                }
                checked += 1;
            }
        }
    }
    for n in 1..=4u8 {
        for k in 1..=3u32 {
            let r = solve_g(n, k, 1, k - 1, &SolveOptions::default()).map_err(|e| e.to_string())?;
            let want = n as u64 + 2 * k as u64 - 2;
            if r.status != SolveStatus::Optimal || r.value != Some(want) {
                return Err(format!(
                    "g({n},{k},1;{}) = {:?} ({:?}), want {want}",
                    k - 1,
                    r.value,
                    r.status
                ));
            }
        }
    }
    Ok(format!("{checked} smax covers and 12 solved g values"))
}

fn criterion_6() -> Outcome {
    for seed in 0..200u64 {
        let n = 2 + (seed % 9) as u8;
        let k = 1 + (seed / 9 % 5) as u32;
        let cover = construct::gv_random_cover(n, k, seed, 1000)
            .map_err(|e| format!("seed {seed}: {e}"))?;
        let code = code_from_cover(&cover).map_err(|e| e.to_string())?;
        let dist = code.min_distance().map_err(|e| e.to_string())?;
        if dist < k {
            return Err(format!("seed {seed}: code distance {dist} < {k}"));
        }
        let back = cover_from_code(&code).map_err(|e| e.to_string())?;
        if back.entries() != cover.entries() {
            return Err(format!("seed {seed}: roundtrip changed the cover"));
        }
        if !back.verify(k).is_cover_for(k)
            || code_from_cover(&back).map_err(|e| e.to_string())? != code
        {
            return Err(format!("seed {seed}: reverse direction fails"));
        }
    }
    Ok("200 roundtrips".into())
}

fn criterion_7_covers() -> Vec<Cover> {
    let mut covers = Vec::new();
    for seed in 0..50u64 {
        let n = 2 + (seed % 4) as u8;
        let c = match seed % 5 {
            0 if n >= 3 => construct::smax_cover(n, 1 + (seed % 3) as u32, 2).unwrap(),
            1 if n >= 3 => construct::lemma31_cover(n, 2 + (seed % 3) as u32, 2).unwrap(),
            _ => {
                let base = construct::gv_random_cover(n, 1 + (seed % 4) as u32, seed, 400).unwrap();
                let u = 1 + (seed as u32 * 7) % ((1 << n) - 1);
                construct::pad_parallel(&base, (seed % 3) as u32, u).unwrap()
            }
        };
        covers.push(c);
    }
    covers
}

fn criterion_7() -> Outcome {
    for (i, c) in criterion_7_covers().iter().enumerate() {
        let n = c.ambient_dim();
        let normals = (1u32 << n) - 1;
        let mut total = 0i64;
        let mut found = false;
        for u in 1..=normals {
            let (x, y) = c.restriction_counts(u).map_err(|e| e.to_string())?;
            let diff = x as i64 - y as i64;
            found |= diff >= 1;
            total += diff;
        }
        let s = c.origin_count() as i64;
        let mean = Ratio::new(total, normals as i64);
        let want = Ratio::new(c.size() as i64 - (s << c.codim()), normals as i64);
        if !found || mean != want {
            return Err(format!(
                "cover {i} (n={n}, d={}, s={s}): mean {mean}, want {want}",
                c.codim()
            ));
        }
    }
    Ok("50 covers".into())
}

fn criterion_8() -> Outcome {
    let mut cells = 0;
    for n in 1..=12u8 {
        for d in 1..=3u8.min(n) {
            for k in 1..=16u32 {
                let (lo, hi) = rule_bounds(n, k, d);
                let (l, h) = (
                    lo.iter().max_by_key(|r| r.1).unwrap(),
                    hi.iter().min_by_key(|r| r.1).unwrap(),
                );
                if l.1 > h.1 {
                    return Err(format!(
                        "({n},{k},{d}): {} {} > {} {}",
                        l.0.label(),
                        l.1,
                        h.0.label(),
                        h.1
                    ));
                }
                cells += 1;
            }
        }
    }
    let ledger =
        BoundLedger::propagate(&Rect::hyperplanes(12, 3), &[]).map_err(|e| e.to_string())?;
    for n in 9..=12u8 {
        if lb_hamming_s0(n, 3).unwrap() < LogExpr::new(n as i64, 1, n as u64, 1) {
            return Err(format!("hamming bound below n + log2 n at n={n}"));
        }
        if hamming_origin_chain(n, 3, 1).is_none() {
            return Err(format!("origin chain does not fire at n={n}"));
        }
        let e = ledger.get(n, 3, 1).unwrap();
        let want = bounds::ub_general(n, 3, 1).unwrap();
        if (e.lo, e.hi) != (want, want)
            || want != n as u64 + 3
            || !e.lo_provenance.contains(&Rule::Hamming)
        {
            return Err(format!(
                "f({n},3): {}..{} via {:?}",
                e.lo, e.hi, e.lo_provenance
            ));
        }
    }
    Ok(format!(
        "{cells} cells consistent; f(n,3)=n+3 via the Hamming chain for n=9..12"
    ))
}

fn report(name: &str, outcome: std::thread::Result<Outcome>, failed: &mut bool) {
    let outcome = outcome.unwrap_or_else(|p| {
        Err(p
            .downcast_ref::<String>()
            .cloned()
            .or(p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default())
    });
    match outcome {
        Ok(msg) => println!("PASS {name}: {msg}"),
        Err(msg) => {
            *failed = true;
            println!("FAIL {name}: {msg}");
        }
    }
}

fn main() {
    let mut failed = false;
    let mut solved = Vec::new();
    report(
        "criterion 1 (formula regime)",
        catch_unwind(criterion_1),
        &mut failed,
    );
    report(
        "criterion 2 (solver vs table)",
        catch_unwind(AssertUnwindSafe(|| criterion_2(&mut solved))),
        &mut failed,
    );
    if long_tier() {
        report(
            "criterion 2 long tier",
            catch_unwind(AssertUnwindSafe(|| criterion_2_long(&mut solved))),
            &mut failed,
        );
    } else {
        println!("SKIP criterion 2 long tier: set SUBCOVER_LONG=1 to run f(6,5) and f(6,8)");
    }
    report(
        "criterion 3 (golay pipeline)",
        catch_unwind(criterion_3),
        &mut failed,
    );
    report(
        "criterion 4 (tables from search + golay)",
        catch_unwind(|| criterion_4(&solved)),
        &mut failed,
    );
    report(
        "criterion 4 (tables from search + golay + published search values)",
        catch_unwind(|| criterion_4_published(&solved)),
        &mut failed,
    );
    report(
        "criterion 5 (top origin multiplicity)",
        catch_unwind(criterion_5),
        &mut failed,
    );
    report(
        "criterion 6 (cover/code roundtrips)",
        catch_unwind(criterion_6),
        &mut failed,
    );
    report(
        "criterion 7 (restriction averaging)",
        catch_unwind(criterion_7),
        &mut failed,
    );
    report(
        "criterion 8 (bound sanity)",
        catch_unwind(criterion_8),
        &mut failed,
    );
    if failed {
        std::process::exit(1);
    }
}
