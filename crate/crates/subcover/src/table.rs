//! Rendering a [`BoundLedger`] as markdown, CSV or JSON.
//!
//! Exact cells print their value, with `*` when it equals `n + 2^d k - d - 2`;
//! open cells print `lo..hi`.

use std::fmt::Write;

use subcover_core::bounds::{n0_report, BoundEntry, BoundLedger};

use crate::json::{CellDoc, TableDoc, ThresholdDoc, FORMAT_VERSION};

/// The part of a ledger to print.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window {
    pub n_min: u8,
    pub n_max: u8,
    pub k_min: u32,
    pub k_max: u32,
    pub d: u8,
}

pub fn cell_text(e: &BoundEntry) -> String {
    if !e.is_exact() {
        return format!("{}..{}", e.lo, e.hi);
    }
    if e.attains_general_upper() {
        format!("{}*", e.lo)
    } else {
        e.lo.to_string()
    }
}

fn cells<'a>(
    ledger: &'a BoundLedger,
    w: &Window,
) -> impl Iterator<Item = (u8, Vec<&'a BoundEntry>)> + 'a {
    let w = *w;
    (w.n_min.max(w.d)..=w.n_max).map(move |n| {
        (
            n,
            (w.k_min..=w.k_max)
                .filter_map(|k| ledger.get(n, k, w.d))
                .collect(),
        )
    })
}

pub fn markdown(ledger: &BoundLedger, w: &Window) -> String {
    let mut out = String::from("| n\\k |");
    for k in w.k_min..=w.k_max {
        write!(out, " {k} |").unwrap();
    }
    out.push_str("\n|---|");
    for _ in w.k_min..=w.k_max {
        out.push_str("---|");
    }
    out.push('\n');
    for (n, row) in cells(ledger, w) {
        write!(out, "| {n} |").unwrap();
        for e in row {
            write!(out, " {} |", cell_text(e)).unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn csv(ledger: &BoundLedger, w: &Window) -> String {
    let mut out = String::from("n,k,d,lo,hi,exact,tight,lo_provenance,hi_provenance\n");
    for (_, row) in cells(ledger, w) {
        for e in row {
            let c = CellDoc::from(e);
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                c.n,
                c.k,
                c.d,
                c.lo,
                c.hi,
                c.exact,
                c.tight,
                c.lo_provenance.join(";"),
                c.hi_provenance.join(";")
            )
            .unwrap();
        }
    }
    out
}

pub fn document(ledger: &BoundLedger, w: &Window) -> TableDoc {
    let cells = cells(ledger, w)
        .flat_map(|(_, row)| row.into_iter().map(CellDoc::from))
        .collect();
    let thresholds = if w.d == 1 {
        (w.k_min.max(2)..=w.k_max)
            .filter_map(|k| n0_report(k, ledger).ok())
            .map(|r| ThresholdDoc::from(&r))
            .collect()
    } else {
        Vec::new()
    };
    TableDoc {
        version: FORMAT_VERSION,
        cells,
        thresholds,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use subcover_core::bounds::{Anchor, Rect};

    #[test]
    fn renders_row_three() {
        let ledger = BoundLedger::propagate(&Rect::hyperplanes(4, 6), &[]).unwrap();
        let w = Window {
            n_min: 3,
            n_max: 3,
            k_min: 3,
            k_max: 6,
            d: 1,
        };
        assert_eq!(
            markdown(&ledger, &w),
            "| n\\k | 3 | 4 | 5 | 6 |\n|---|---|---|---|---|\n| 3 | 6* | 7 | 9 | 11 |\n"
        );
        let text = csv(&ledger, &w);
        assert!(text
            .lines()
            .nth(1)
            .unwrap()
            .starts_with("3,3,1,6,6,true,true,"));
        assert_eq!(document(&ledger, &w).cells.len(), 4);
    }

    #[test]
    fn open_cells_show_interval() {
        let ledger =
            BoundLedger::propagate(&Rect::hyperplanes(6, 9), &[Anchor::exact(6, 8, 1, 18, "t")])
                .unwrap();
        let w = Window {
            n_min: 6,
            n_max: 6,
            k_min: 9,
            k_max: 9,
            d: 1,
        };
        assert!(markdown(&ledger, &w).contains("| 6 | 19..20 |"));
    }
}
