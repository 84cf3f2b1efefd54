//! Exhaustive comparison of map enumeration against the coefficient tables.

use std::collections::BTreeMap;

use allgenus_core::algebra::{BigInt, BigPoly, Var};
use allgenus_core::gfengine::{dist_series, map_counts, Statistic};
use allgenus_core::mapcore::{
    canonical_encode, decompose, enumerate_maps, euler_characteristic, stat, Decomposition,
    MapStat, RootedMap,
};

const MAX_N: usize = 5;

fn histogram(maps: &[RootedMap], which: MapStat) -> Vec<BigInt> {
    let mut h: Vec<BigInt> = Vec::new();
    for m in maps {
        let k = stat(m, which);
        if h.len() <= k {
            h.resize(k + 1, BigInt::ZERO);
        }
        h[k] += 1;
    }
    h
}

#[test]
fn histograms_equal_table_rows() {
    let tables: Vec<_> = Statistic::ALL
        .iter()
        .map(|&s| dist_series(s, MAX_N))
        .collect();
    for n in 0..=MAX_N {
        let maps: Vec<RootedMap> = enumerate_maps(n).collect();
        for table in &tables {
            let stat_kind = MapStat::from(table.statistic());
            let h = BigPoly::from_coeffs(histogram(&maps, stat_kind));
            let expected = BigPoly::from_coeffs(table.marginal(n).unwrap());
            assert_eq!(h, expected, "{} n={n}", table.statistic());
        }
        // joint (root degree, loops)
        let mut joint: BTreeMap<(usize, usize), i64> = BTreeMap::new();
        for m in &maps {
            *joint
                .entry((stat(m, MapStat::RootDegree), stat(m, MapStat::Loops)))
                .or_default() += 1;
        }
        let loops = &tables[2];
        assert_eq!(loops.statistic(), Statistic::Loops);
        let row = loops.row(n).unwrap();
        let from_table: BTreeMap<(usize, usize), i64> = row
            .terms()
            .map(|(i, j, c)| ((i, j), i64::try_from(c.clone()).unwrap()))
            .collect();
        assert_eq!(joint, from_table, "joint n={n}");
    }
}

#[test]
fn duality_and_euler() {
    for n in 0..=MAX_N {
        let maps: Vec<RootedMap> = enumerate_maps(n).collect();
        assert_eq!(
            histogram(&maps, MapStat::RootFaceDegree),
            histogram(&maps, MapStat::RootDegree),
            "n={n}"
        );
        for m in &maps {
            let chi = euler_characteristic(m);
            assert!(chi <= 2 && (2 - chi) % 2 == 0, "chi={chi}");
        }
    }
}

#[test]
fn genus_distribution_sums() {
    // 9 of the 10 two-edge maps are planar
    let maps: Vec<RootedMap> = enumerate_maps(2).collect();
    let h = histogram(&maps, MapStat::Genus);
    assert_eq!(h, vec![BigInt::from(9), BigInt::from(1)]);
}

#[test]
fn bridge_classification() {
    for n in 1..=MAX_N {
        for m in enumerate_maps(n) {
            let d = decompose(&m).unwrap();
            let isthmus_step = matches!(d, Decomposition::Isthmus { .. });
            assert_eq!(isthmus_step, is_bridge_by_graph(&m), "n={n}");
            assert_eq!(canonical_encode(&d.rebuild()), canonical_encode(&m));
        }
    }
}

/// Bridge test on the underlying multigraph: BFS over vertices without the
/// root edge.
fn is_bridge_by_graph(m: &RootedMap) -> bool {
    let sigma = m.sigma();
    let darts = sigma.len();
    let mut vertex = vec![usize::MAX; darts];
    let mut nv = 0;
    for s in 0..darts {
        if vertex[s] == usize::MAX {
            let mut d = s;
            while vertex[d] == usize::MAX {
                vertex[d] = nv;
                d = sigma[d] as usize;
            }
            nv += 1;
        }
    }
    let root_edge = m.root().unwrap() as usize / 2;
    let mut adj = vec![Vec::new(); nv];
    for e in 0..darts / 2 {
        if e != root_edge {
            adj[vertex[2 * e]].push(vertex[2 * e + 1]);
            adj[vertex[2 * e + 1]].push(vertex[2 * e]);
        }
    }
    let (from, to) = (vertex[2 * root_edge], vertex[2 * root_edge + 1]);
    let mut seen = vec![false; nv];
    let mut stack = vec![from];
    seen[from] = true;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    !seen[to]
}

#[test]
fn all_stats_marginals_agree_with_counts() {
    let m = map_counts(MAX_N);
    for n in 0..=MAX_N {
        let maps: Vec<RootedMap> = enumerate_maps(n).collect();
        assert_eq!(BigInt::from(maps.len()), m.as_slice()[n]);
        let table = dist_series(Statistic::Loops, n);
        assert_eq!(
            table.row(n).unwrap().eval_at_one(Var::W).unwrap().sum(),
            m.as_slice()[n]
        );
    }
}
