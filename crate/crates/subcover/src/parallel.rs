//! Multi-threaded verification and minimum distance. Results are identical
//! to the single-threaded core routines for any thread count.

use rayon::prelude::*;
use subcover_core::{Cover, CoverReport, LinearCode};

/// Points or messages handed to one task.
const CHUNK: u64 = 1 << 12;

fn pool(threads: usize) -> anyhow::Result<rayon::ThreadPool> {
    Ok(rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()?)
}

/// Coverage report for `k`, counting each point's memberships in parallel.
/// `threads = 0` lets rayon choose.
pub fn verify(cover: &Cover, k: u32, threads: usize) -> anyhow::Result<CoverReport> {
    let npoints = 1u32 << cover.ambient_dim();
    let counts: Vec<u32> = pool(threads)?.install(|| {
        (0..npoints)
            .into_par_iter()
            .with_min_len(CHUNK as usize)
            .map(|x| {
                cover
                    .entries()
                    .iter()
                    .filter(|(s, _)| s.contains_bits(x))
                    .map(|(_, m)| *m)
                    .sum()
            })
            .collect()
    });
    Ok(CoverReport::from_counts(
        cover.ambient_dim(),
        cover.codim(),
        cover.size(),
        k,
        &counts,
    ))
}

/// Minimum distance with the Gray-code walk split into independent ranges.
pub fn min_distance(code: &LinearCode, threads: usize) -> anyhow::Result<u32> {
    let end = 1u64 << code.dim();
    let starts: Vec<u64> = (0..end).step_by(CHUNK as usize).collect();
    let best = pool(threads)?.install(|| {
        starts
            .par_iter()
            .map(|&s| code.min_distance_in(s, s + CHUNK))
            .collect::<Result<Vec<_>, _>>()
    })?;
    Ok(best.into_iter().min().unwrap_or(u32::MAX))
}

#[cfg(test)]
mod tests {
    use super::*;
    use subcover_core::{code, construct};

    #[test]
    fn matches_single_threaded() {
        let covers = [
            construct::diagonal_cover(9).unwrap(),
            construct::gv_random_cover(10, 4, 7, 200).unwrap(),
            code::golay_cover().unwrap(),
        ];
        for c in &covers {
            for t in [1, 3] {
                assert_eq!(verify(c, 4, t).unwrap(), c.verify(4));
            }
        }
        let g = code::golay_generator();
        for t in [1, 2, 5] {
            assert_eq!(min_distance(&g, t).unwrap(), 8);
        }
        let small = LinearCode::new(3, vec![1, 2, 4, 7]).unwrap();
        assert_eq!(
            min_distance(&small, 2).unwrap(),
            small.min_distance().unwrap()
        );
    }
}
