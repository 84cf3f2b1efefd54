//! The eight acceptance criteria, each a list of named sub-checks.
//!
//! Shared by `allgenus check` and the `acceptance` test target.

use std::collections::{BTreeMap, HashSet};

use allgenus_core::chords::{enumerate_diagrams, isolated_chords, partner_of_one, ChordDiagram};
use allgenus_core::gfengine::{
    eta_triangle, finite_eta_ratio, map_counts, phi_convolve, phi_series, q_degree_closed,
    q_edges_closed, s_closed, s_convolve, vertices_alt_series,
};
use allgenus_core::mapcore::{
    canonical_encode, enumerate_maps, euler_characteristic, genus, stat, MapStat, RootedMap,
};
use allgenus_core::stats::{
    ks_distance, limit_law, loop_moment_check, standardized_vertex_check, tv_distance_to_law,
    ExactDist,
};
use allgenus_core::{BigInt, BigPoly, BigRat, Statistic, Var};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::sampling::{diagram_histogram, map_histogram, with_pool};
use crate::tables::shared;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> CheckOutcome {
    CheckOutcome {
        name: name.into(),
        passed,
        detail: detail.into(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Criterion {
    pub id: u8,
    pub title: &'static str,
    pub checks: Vec<CheckOutcome>,
}

impl Criterion {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// One line: `PASS [k] title` or `FAIL [k] title: failing sub-checks`.
    pub fn summary(&self) -> String {
        let failed: Vec<String> = self
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("{} ({})", c.name, c.detail))
            .collect();
        if failed.is_empty() {
            format!(
                "PASS [{}] {} ({} checks)",
                self.id,
                self.title,
                self.checks.len()
            )
        } else {
            format!("FAIL [{}] {}: {}", self.id, self.title, failed.join("; "))
        }
    }
}

/// n-grids for the convergence checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimitsConfig {
    pub grid: Vec<usize>,
    pub loops_grid: Vec<usize>,
}

impl Default for LimitsConfig {
    fn default() -> Self {
        LimitsConfig {
            grid: vec![25, 50, 100, 200],
            loops_grid: vec![25, 50, 100],
        }
    }
}

/// Strictly decreasing.
pub fn decreasing(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[1] < w[0])
}

fn fmt_seq(values: &[f64]) -> String {
    let parts: Vec<String> = values.iter().map(|v| format!("{v:.6}")).collect();
    format!("[{}]", parts.join(", "))
}

fn int(n: usize) -> BigInt {
    BigInt::from(n)
}

fn histogram(values: impl Iterator<Item = usize>) -> Vec<BigInt> {
    let mut h: Vec<BigInt> = Vec::new();
    for v in values {
        if h.len() <= v {
            h.resize(v + 1, BigInt::zero());
        }
        h[v] += 1;
    }
    h
}

pub const MAP_COUNTS: [u64; 7] = [1, 2, 10, 74, 706, 8162, 110410];

pub fn criterion1() -> Criterion {
    let counts = map_counts(6);
    let expected: Vec<BigInt> = MAP_COUNTS.iter().map(|&c| BigInt::from(c)).collect();
    let mut checks = vec![check(
        "map_counts(6)",
        counts.as_slice() == expected.as_slice(),
        format!(
            "{:?}",
            counts
                .as_slice()
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
        ),
    )];
    for (n, &expected) in MAP_COUNTS.iter().enumerate().take(6) {
        let mut seen = HashSet::new();
        let mut total = 0u64;
        for m in enumerate_maps(n) {
            total += 1;
            seen.insert(canonical_encode(&m));
        }
        checks.push(check(
            format!("enumerate_maps({n}) distinct"),
            total == expected && seen.len() as u64 == total,
            format!("{total} maps, {} distinct encodings", seen.len()),
        ));
        let diagrams = enumerate_diagrams(n + 1, true).count() as u64;
        checks.push(check(
            format!("indecomposable diagrams with {} chords", n + 1),
            diagrams == expected,
            format!("{diagrams}"),
        ));
    }
    Criterion {
        id: 1,
        title: "map counts",
        checks,
    }
}

pub fn criterion2() -> Criterion {
    let grid = [10, 20, 50, 100, 200];
    let counts = map_counts(200);
    let phi = phi_series(200);
    let gaps: Vec<BigRat> = grid
        .iter()
        .map(|&n| {
            let ratio = BigRat::new(counts.get(n).unwrap().clone(), phi.get(n).unwrap().clone());
            (ratio - BigRat::from_integer(int(2 * n - 1))).abs()
        })
        .collect();
    let floats: Vec<f64> = gaps.iter().map(|g| g.to_f64().unwrap()).collect();
    let exact_decreasing = gaps.windows(2).all(|w| w[1] < w[0]);
    let last = gaps.last().unwrap();
    Criterion {
        id: 2,
        title: "m_n / φ_n - (2n - 1) vanishes",
        checks: vec![
            check(
                "decreasing over {10,20,50,100,200}",
                exact_decreasing,
                fmt_seq(&floats),
            ),
            check(
                "below 0.01 at n = 200",
                *last < BigRat::new(int(1), int(100)),
                format!("{:.6}", floats[4]),
            ),
        ],
    }
}

pub fn criterion3() -> Criterion {
    const N: usize = 100;
    let phi = phi_series(N);
    let degree = shared(Statistic::RootDegree);
    let edges = shared(Statistic::RootEdges);
    let vertices = shared(Statistic::Vertices);
    let loops = shared(Statistic::Loops);

    let first_bad =
        |ok: &dyn Fn(usize) -> bool, from: usize, to: usize| (from..=to).find(|&n| !ok(n));
    let report = |name: &str, bad: Option<usize>, to: usize| match bad {
        None => check(name, true, format!("n <= {to}")),
        Some(n) => check(name, false, format!("mismatch at n = {n}")),
    };

    let deg = first_bad(
        &|n| phi_convolve(degree, &phi, n).unwrap() == q_degree_closed(n),
        0,
        N,
    );
    let edg = first_bad(
        &|n| phi_convolve(edges, &phi, n).unwrap() == q_edges_closed(n),
        0,
        N,
    );

    let s_ok = |n: usize| {
        s_convolve(vertices, n).unwrap() == s_closed(n).scale(&BigRat::from_integer(int(2 * n)))
    };
    let s_bad = first_bad(&s_ok, 1, N);

    let alt = vertices_alt_series(50);
    let alt_bad = first_bad(&|n| alt.row(n).unwrap() == vertices.row(n).unwrap(), 0, 50);
    let w_bad = first_bad(
        &|n| loops.row(n).unwrap().eval_at_one(Var::W).unwrap() == *degree.row(n).unwrap(),
        0,
        N,
    );

    Criterion {
        id: 3,
        title: "exact identities",
        checks: vec![
            report("φ · root degree = φ_n (1 + ... + v^2n)", deg, N),
            report("φ · root edges = 2^n n! Σ C(2j,j) 4^-j v^(n-j)", edg, N),
            report("Σ s_k x_(n-k) = 2n s_n", s_bad, N),
            report("vertices: two routes agree", alt_bad, 50),
            report("loops at w = 1 = root degree", w_bad, N),
        ],
    }
}

/// Value of every table statistic for one map.
fn table_value(m: &RootedMap, s: Statistic) -> usize {
    stat(m, MapStat::from(s))
}

pub fn criterion4() -> Criterion {
    const N: usize = 5;
    let mut checks = Vec::new();
    let maps: Vec<Vec<RootedMap>> = (0..=N).map(|n| enumerate_maps(n).collect()).collect();
    for s in Statistic::ALL.into_iter().filter(|s| !s.is_joint()) {
        let table = shared(s);
        let bad = (0..=N).find(|&n| {
            histogram(maps[n].iter().map(|m| table_value(m, s))) != table.marginal(n).unwrap()
        });
        checks.push(check(
            format!("{} histograms", s.name()),
            bad.is_none(),
            bad.map_or(format!("n <= {N}"), |n| format!("mismatch at n = {n}")),
        ));
    }

    let loops = shared(Statistic::Loops);
    let joint_bad = (0..=N).find(|&n| {
        let mut grid: BTreeMap<(usize, usize), BigInt> = BTreeMap::new();
        for m in &maps[n] {
            *grid
                .entry((stat(m, MapStat::RootDegree), stat(m, MapStat::Loops)))
                .or_default() += 1;
        }
        let row = loops.row(n).unwrap();
        let rows: Vec<Vec<BigInt>> = (0..=row.degree(Var::V).unwrap_or(0))
            .map(|i| {
                (0..=row.degree(Var::W).unwrap_or(0))
                    .map(|j| grid.get(&(i, j)).cloned().unwrap_or_default())
                    .collect()
            })
            .collect();
        BigPoly::from_grid(rows) != *row
    });
    checks.push(check(
        "joint (root degree, loops) histograms",
        joint_bad.is_none(),
        joint_bad.map_or(format!("n <= {N}"), |n| format!("mismatch at n = {n}")),
    ));

    let euler_bad = maps.iter().flatten().find(|m| {
        let chi = euler_characteristic(m);
        let g = genus(m);
        chi > 2 || chi % 2 != 0 || chi != 2 - 2 * g as i64 || 2 * g > m.n_edges()
    });
    checks.push(check(
        "Euler characteristic and genus",
        euler_bad.is_none(),
        format!("{} maps", maps.iter().map(Vec::len).sum::<usize>()),
    ));

    let dual_bad = (0..=N).find(|&n| {
        histogram(maps[n].iter().map(|m| stat(m, MapStat::RootFaceDegree)))
            != histogram(maps[n].iter().map(|m| stat(m, MapStat::RootDegree)))
    });
    checks.push(check(
        "root face degree = root degree in law",
        dual_bad.is_none(),
        dual_bad.map_or(format!("n <= {N}"), |n| format!("mismatch at n = {n}")),
    ));
    Criterion {
        id: 4,
        title: "brute-force enumeration = equations",
        checks,
    }
}

pub fn criterion5() -> Criterion {
    let eta = eta_triangle(10, 5);
    let k_bad = (0..=10).find(|&k| {
        eta.get(k, 0) != Some(&BigRat::new(BigInt::from(2).pow(k as u32 + 1), int(k + 1)))
    });
    let mut checks = vec![
        check(
            "η_(k,0) = 2^(k+1) / (k+1), k <= 10",
            k_bad.is_none(),
            format!("{k_bad:?}"),
        ),
        check(
            "η_(0,1) = 1",
            eta.get(0, 1) == Some(&BigRat::one()),
            format!("{:?}", eta.get(0, 1).map(|r| r.to_string())),
        ),
        check(
            "η_(0,2) = 7/12",
            eta.get(0, 2) == Some(&BigRat::new(int(7), int(12))),
            format!("{:?}", eta.get(0, 2).map(|r| r.to_string())),
        ),
    ];
    let loops = shared(Statistic::Loops);
    for l in 0..=3 {
        let target = eta.get(0, l).unwrap();
        let dist = |n| (finite_eta_ratio(loops, 0, l, n).unwrap() - target).abs();
        let (d50, d100) = (dist(50), dist(100));
        checks.push(check(
            format!("finite ratio (0,{l}) closer at n = 100 than 50"),
            d100 < d50,
            format!(
                "{:.6} -> {:.6}",
                d50.to_f64().unwrap(),
                d100.to_f64().unwrap()
            ),
        ));
    }
    Criterion {
        id: 5,
        title: "η triangle",
        checks,
    }
}

pub fn criterion6(cfg: &LimitsConfig) -> Criterion {
    let mut checks = Vec::new();
    let largest = *cfg.grid.last().expect("nonempty grid");
    let dist = |s: Statistic, n: usize| ExactDist::from_table(shared(s), n).unwrap();

    // discrete laws by total variation
    for (s, mean_target, mean_tol, tv_cap) in [
        (Statistic::Leaves, 1.0, 0.02, 0.05),
        (Statistic::RootIsthmic, 2.0, 0.05, 0.08),
    ] {
        let tvs: Vec<f64> = cfg
            .grid
            .iter()
            .map(|&n| tv_distance_to_law(&dist(s, n).to_float(), &limit_law(s, n, None).0).unwrap())
            .collect();
        let mean = dist(s, largest).mean().to_f64().unwrap();
        checks.push(check(
            format!("{} TV decreasing", s.name()),
            decreasing(&tvs),
            fmt_seq(&tvs),
        ));
        checks.push(check(
            format!("{} TV < {tv_cap} at n = {largest}", s.name()),
            tvs.last().is_some_and(|&t| t < tv_cap),
            format!("{:.6}", tvs.last().unwrap()),
        ));
        checks.push(check(
            format!("{} mean within {mean_tol} of {mean_target}", s.name()),
            (mean - mean_target).abs() < mean_tol,
            format!("{mean:.6}"),
        ));
    }

    // scaled continuous laws by Kolmogorov–Smirnov
    for (s, mean_target) in [
        (Statistic::RootEdges, 2.0 / 3.0),
        (Statistic::RootDegree, 1.0),
    ] {
        let ks: Vec<f64> = cfg
            .grid
            .iter()
            .map(|&n| {
                let (law, scale) = limit_law(s, n, None);
                ks_distance(&dist(s, n).to_float(), scale, &law).unwrap()
            })
            .collect();
        let mean = (dist(s, largest).mean() / BigRat::from_integer(int(largest)))
            .to_f64()
            .unwrap();
        checks.push(check(
            format!("{} KS decreasing", s.name()),
            decreasing(&ks),
            fmt_seq(&ks),
        ));
        checks.push(check(
            format!("{} mean/n within 0.01 of {mean_target:.4}", s.name()),
            (mean - mean_target).abs() < 0.01,
            format!("{mean:.6}"),
        ));
    }

    // loops in moments
    const ORDERS: usize = 5;
    let eta = eta_triangle(0, ORDERS);
    let reports: Vec<_> = cfg
        .loops_grid
        .iter()
        .map(|&n| loop_moment_check(shared(Statistic::Loops), &eta, n, ORDERS).unwrap())
        .collect();
    for l in 1..=ORDERS {
        let devs: Vec<f64> = reports.iter().map(|r| r[l - 1].deviation()).collect();
        let exact_zero = reports.iter().all(|r| r[l - 1].exact == r[l - 1].limit);
        checks.push(check(
            format!("loops moment {l} deviation decreasing"),
            exact_zero || decreasing(&devs),
            if exact_zero {
                "exact at every n".to_string()
            } else {
                fmt_seq(&devs)
            },
        ));
    }

    // vertices through E[2^X], E[3^X] and var/mean
    let vertices = shared(Statistic::Vertices);
    let small = standardized_vertex_check(vertices, 50).unwrap();
    let big = standardized_vertex_check(vertices, largest).unwrap();
    for (v, d_small, d_big) in [
        (2, small.deviation2(), big.deviation2()),
        (3, small.deviation3(), big.deviation3()),
    ] {
        checks.push(check(
            format!("E[{v}^X] ratio within 5% at n = {largest}, closer than at 50"),
            d_big < 0.05 && d_big < d_small,
            format!("{d_small:.6} -> {d_big:.6}"),
        ));
    }
    let vm = big.variance_over_mean();
    checks.push(check(
        format!("vertices variance/mean within 15% of 1 at n = {largest}"),
        (vm - 1.0).abs() < 0.15,
        format!(
            "{vm:.6} (mean {:.4}, variance {:.4})",
            big.mean.to_f64().unwrap(),
            big.variance.to_f64().unwrap()
        ),
    ));
    Criterion {
        id: 6,
        title: "limit-law convergence",
        checks,
    }
}

/// Chi-square statistic and upper-tail p-value of `observed` against equal
/// expected counts over `classes` cells.
pub fn chi_square_uniform(observed: &[u64], classes: usize) -> (f64, f64) {
    let total: u64 = observed.iter().sum();
    let expected = total as f64 / classes as f64;
    let missing = classes.saturating_sub(observed.len()) as f64;
    let stat: f64 = observed
        .iter()
        .map(|&o| (o as f64 - expected).powi(2) / expected)
        .sum::<f64>()
        + missing * expected;
    let law = ChiSquared::new((classes - 1) as f64).expect("positive degrees of freedom");
    (stat, 1.0 - law.cdf(stat))
}

pub const SAMPLER_SEED: u64 = 0x5eed;

pub fn criterion7() -> Criterion {
    const N: usize = 4;
    let classes = MAP_COUNTS[N] as usize;
    let trials = 1000 * classes as u64;
    let counts = map_counts(N);
    let run = || with_pool(|| map_histogram(N, trials, SAMPLER_SEED, &counts, canonical_encode));
    let first = run();
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .expect("pool")
        .install(|| map_histogram(N, trials, SAMPLER_SEED, &counts, canonical_encode));

    let known: HashSet<Vec<u8>> = enumerate_maps(N).map(|m| canonical_encode(&m)).collect();
    let all_known = first.keys().all(|k| known.contains(k));
    let observed: Vec<u64> = first.values().copied().collect();
    let (stat, p) = chi_square_uniform(&observed, classes);
    Criterion {
        id: 7,
        title: "sampler uniformity",
        checks: vec![
            check(
                "every class hit, no unknown classes",
                all_known && first.len() == classes,
                format!("{} classes seen", first.len()),
            ),
            check(
                "chi-square p > 0.001",
                p > 0.001,
                format!("chi2 = {stat:.2}, df = {}, p = {p:.4}", classes - 1),
            ),
            check(
                "bit-reproducible across thread counts",
                first == single,
                format!("seed {SAMPLER_SEED:#x}"),
            ),
        ],
    }
}

pub fn criterion8() -> Criterion {
    const N: usize = 5;
    let leaves = shared(Statistic::Leaves);
    let degree = shared(Statistic::RootDegree);
    let by_size: Vec<Vec<ChordDiagram>> = (0..=N)
        .map(|n| enumerate_diagrams(n + 1, true).collect())
        .collect();
    let iso_bad = (0..=N).find(|&n| {
        histogram(by_size[n].iter().map(isolated_chords)) != leaves.marginal(n).unwrap()
    });
    let partner_bad = (0..=N).find(|&n| {
        histogram(by_size[n].iter().map(|d| partner_of_one(d) as usize - 2))
            != degree.marginal(n).unwrap()
    });

    const CHORDS: usize = 6;
    const TRIALS: u64 = 100_000;
    let run = with_pool(|| {
        diagram_histogram(CHORDS, TRIALS, SAMPLER_SEED, |d| {
            u64::from(partner_of_one(d))
        })
    });
    let exact = MAP_COUNTS[CHORDS - 1] as f64 / 10395.0;
    let sigma = (exact * (1.0 - exact) / run.attempts as f64).sqrt();
    let rate = run.acceptance_rate();
    let mark =
        |bad: Option<usize>| bad.map_or(format!("n <= {N}"), |n| format!("mismatch at n = {n}"));
    Criterion {
        id: 8,
        title: "chord diagram correspondences",
        checks: vec![
            check(
                "partner(1) - 2 ~ root degree",
                partner_bad.is_none(),
                mark(partner_bad),
            ),
            check("isolated chords ~ leaves", iso_bad.is_none(), mark(iso_bad)),
            check(
                "acceptance rate at 6 chords within 3σ",
                (rate - exact).abs() < 3.0 * sigma,
                format!(
                    "{rate:.5} vs {exact:.5} (σ = {sigma:.5}, {} attempts)",
                    run.attempts
                ),
            ),
        ],
    }
}

/// Criteria grouped by `check --suite`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Identities,
    Brute,
    Limits,
    Sampler,
    All,
}

pub fn run_suite(suite: Suite, cfg: &LimitsConfig) -> Vec<Criterion> {
    let mut out = Vec::new();
    if matches!(suite, Suite::Identities | Suite::All) {
        out.extend([criterion1(), criterion2(), criterion3(), criterion5()]);
    }
    if matches!(suite, Suite::Brute | Suite::All) {
        out.push(criterion4());
    }
    if matches!(suite, Suite::Limits | Suite::All) {
        out.push(criterion6(cfg));
    }
    if matches!(suite, Suite::Sampler | Suite::All) {
        out.extend([criterion7(), criterion8()]);
    }
    out.sort_by_key(|c| c.id);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strict_decrease() {
        assert!(decreasing(&[3.0, 2.0, 1.0]));
        assert!(!decreasing(&[3.0, 3.0, 1.0]));
        assert!(decreasing(&[]));
    }

    #[test]
    fn chi_square_reference_values() {
        let (stat, p) = chi_square_uniform(&[100, 100, 100], 3);
        assert_eq!(stat, 0.0);
        assert!((p - 1.0).abs() < 1e-12);
        // (60-50)^2/50 * 2 = 4 on 1 df: upper tail 0.0455
        let (stat, p) = chi_square_uniform(&[60, 40], 2);
        assert!((stat - 4.0).abs() < 1e-12);
        assert!((p - 0.04550026).abs() < 1e-6, "{p}");
        // an unseen class counts its full expectation
        let (stat, _) = chi_square_uniform(&[10], 2);
        assert!((stat - 10.0).abs() < 1e-12);
    }

    #[test]
    fn summary_lines() {
        let c = Criterion {
            id: 9,
            title: "demo",
            checks: vec![check("a", true, "ok"), check("b", false, "0.5")],
        };
        assert_eq!(c.summary(), "FAIL [9] demo: b (0.5)");
        assert!(!c.passed());
    }
}
