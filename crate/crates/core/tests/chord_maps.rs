//! Chord-diagram statistics against map tables: indecomposable diagrams
//! with `n + 1` chords carry the leaves and root-degree distributions of maps
//! with `n` edges.

use allgenus_core::chords::{enumerate_diagrams, isolated_chords, partner_of_one};
use allgenus_core::{dist_series, BigInt, Statistic};
use num_traits::ToPrimitive;

fn histogram(values: impl Iterator<Item = usize>) -> Vec<BigInt> {
    let mut h: Vec<BigInt> = Vec::new();
    for v in values {
        if h.len() <= v {
            h.resize(v + 1, BigInt::ZERO);
        }
        h[v] += 1;
    }
    h
}

#[test]
fn isolated_chords_match_leaves() {
    let leaves = dist_series(Statistic::Leaves, 5);
    for n in 0..=5 {
        let h = histogram(enumerate_diagrams(n + 1, true).map(|d| isolated_chords(&d)));
        assert_eq!(h, leaves.marginal(n).unwrap(), "n={n}");
    }
}

#[test]
fn partner_of_one_matches_root_degree() {
    let degree = dist_series(Statistic::RootDegree, 5);
    for n in 0..=5 {
        let h = histogram(enumerate_diagrams(n + 1, true).map(|d| partner_of_one(&d) as usize - 2));
        assert_eq!(h, degree.marginal(n).unwrap(), "n={n}");
    }
}

#[test]
fn partner_of_one_flattens_with_size() {
    let tv_to_uniform = |chords: usize| {
        let h = histogram(enumerate_diagrams(chords, true).map(|d| partner_of_one(&d) as usize));
        let total: f64 = h.iter().map(|c| c.to_f64().unwrap()).sum();
        let u = 1.0 / (2 * chords - 1) as f64;
        0.5 * (2..=2 * chords)
            .map(|k| {
                let p = h.get(k).map_or(0.0, |c| c.to_f64().unwrap()) / total;
                (p - u).abs()
            })
            .sum::<f64>()
    };
    assert!(tv_to_uniform(7) < tv_to_uniform(4));
}
