//! Reference limit laws and distances from exact or empirical distributions
//! to them.
//!
//! Everything upstream of this module is exact. Floating point starts here,
//! and only for the distances; moments and means stay rational.

use alloc::vec::Vec;

use libm::{erf, exp, fabs, lgamma, log, pow, sqrt};
use num_traits::{One, Pow, ToPrimitive, Zero};

use crate::algebra::{falling_factorial, BigInt, BigRat, Var};
use crate::gfengine::{exact_mean_var, DistTable, GfError, MomentTriangle, Statistic};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum StatsError {
    #[error("the loop law is known only through its moments")]
    NoCdf,
    #[error("law is continuous, total variation needs a pmf")]
    NotDiscrete,
    #[error("invalid distribution: {0}")]
    Invalid(&'static str),
    #[error(transparent)]
    Table(#[from] GfError),
    #[error("moment triangle too small for order {0}")]
    TriangleTooSmall(usize),
}

/// Exact distribution on `0, 1, 2, ...` from integer counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactDist {
    probs: Vec<BigRat>,
}

impl ExactDist {
    pub fn from_counts(counts: &[BigInt]) -> Result<Self, StatsError> {
        let total: BigInt = counts.iter().sum();
        if total.is_zero() || counts.iter().any(|c| c < &BigInt::ZERO) {
            return Err(StatsError::Invalid(
                "counts must be nonnegative with a positive total",
            ));
        }
        let probs = counts
            .iter()
            .map(|c| BigRat::new(c.clone(), total.clone()))
            .collect();
        Ok(ExactDist { probs })
    }

    /// Distribution of the statistic of `table` at size `n`.
    pub fn from_table(table: &DistTable, n: usize) -> Result<Self, StatsError> {
        Self::from_counts(&table.marginal(n)?)
    }

    pub fn probs(&self) -> &[BigRat] {
        &self.probs
    }

    pub fn total(&self) -> BigRat {
        self.probs.iter().sum()
    }

    /// `E[(K / scale)^order]`.
    pub fn moment(&self, order: usize, scale: &BigRat) -> BigRat {
        let raw: BigRat = self
            .probs
            .iter()
            .enumerate()
            .map(|(k, p)| p * BigRat::from_integer(Pow::pow(BigInt::from(k), order)))
            .sum();
        raw / Pow::pow(scale.clone(), order)
    }

    pub fn mean(&self) -> BigRat {
        self.moment(1, &BigRat::one())
    }

    pub fn to_float(&self) -> DiscreteDist {
        DiscreteDist {
            points: self
                .probs
                .iter()
                .enumerate()
                .map(|(k, p)| (k as i64, p.to_f64().unwrap_or(0.0)))
                .collect(),
        }
    }
}

/// Floating-point distribution on integers, kept sorted by value.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteDist {
    points: Vec<(i64, f64)>,
}

impl DiscreteDist {
    /// Points may be unsorted or repeated; equal values are merged.
    pub fn new(mut points: Vec<(i64, f64)>) -> Result<Self, StatsError> {
        if points.iter().any(|&(_, p)| p.is_nan() || p < 0.0) {
            return Err(StatsError::Invalid("negative or NaN probability"));
        }
        let total: f64 = points.iter().map(|&(_, p)| p).sum();
        if fabs(total - 1.0) > 1e-9 {
            return Err(StatsError::Invalid("probabilities must sum to 1"));
        }
        points.sort_by_key(|&(k, _)| k);
        let mut merged: Vec<(i64, f64)> = Vec::with_capacity(points.len());
        for (k, p) in points {
            match merged.last_mut() {
                Some((last, q)) if *last == k => *q += p,
                _ => merged.push((k, p)),
            }
        }
        Ok(DiscreteDist { points: merged })
    }

    /// Empirical distribution from `(value, count)` pairs.
    pub fn from_histogram(hist: &[(i64, u64)]) -> Result<Self, StatsError> {
        let total: u64 = hist.iter().map(|&(_, c)| c).sum();
        if total == 0 {
            return Err(StatsError::Invalid("empty histogram"));
        }
        Self::new(
            hist.iter()
                .map(|&(k, c)| (k, c as f64 / total as f64))
                .collect(),
        )
    }

    pub fn points(&self) -> &[(i64, f64)] {
        &self.points
    }

    pub fn prob(&self, k: i64) -> f64 {
        self.points
            .binary_search_by_key(&k, |&(x, _)| x)
            .map_or(0.0, |i| self.points[i].1)
    }

    pub fn mean(&self) -> f64 {
        self.points.iter().map(|&(k, p)| k as f64 * p).sum()
    }
}

/// Limit laws of the six statistics, after scaling.
#[derive(Clone, Debug, PartialEq)]
pub enum ReferenceLaw {
    Poisson {
        lambda: f64,
    },
    /// pmf `p (1 - p)^{k-1}` on `k >= 1`.
    ShiftedGeometric {
        p: f64,
    },
    Normal {
        mean: f64,
        sd: f64,
    },
    /// Beta(1, 1/2): density `½ (1 - t)^{-1/2}` on `[0, 1)`.
    BetaOneHalf,
    Uniform {
        lo: f64,
        hi: f64,
    },
    /// Known only by its moments `E[L^ℓ]`, `ℓ = 0, 1, ...`.
    LoopLaw {
        moments: Vec<f64>,
    },
}

impl ReferenceLaw {
    pub fn is_discrete(&self) -> bool {
        matches!(
            self,
            ReferenceLaw::Poisson { .. } | ReferenceLaw::ShiftedGeometric { .. }
        )
    }

    /// Probability mass at `k` for the discrete laws.
    pub fn pmf(&self, k: i64) -> Option<f64> {
        match *self {
            ReferenceLaw::Poisson { lambda } => Some(if k < 0 {
                0.0
            } else {
                exp(k as f64 * log(lambda) - lambda - lgamma(k as f64 + 1.0))
            }),
            ReferenceLaw::ShiftedGeometric { p } => Some(if k < 1 {
                0.0
            } else {
                p * pow(1.0 - p, (k - 1) as f64)
            }),
            _ => None,
        }
    }

    pub fn cdf(&self, t: f64) -> Option<f64> {
        match self {
            ReferenceLaw::Poisson { .. } | ReferenceLaw::ShiftedGeometric { .. } => {
                if t < 0.0 {
                    return Some(0.0);
                }
                let top = libm::floor(t) as i64;
                Some(
                    (0..=top)
                        .map(|k| self.pmf(k).unwrap_or(0.0))
                        .sum::<f64>()
                        .min(1.0),
                )
            }
            ReferenceLaw::Normal { mean, sd } => {
                Some(0.5 * (1.0 + erf((t - mean) / (sd * sqrt(2.0)))))
            }
            ReferenceLaw::BetaOneHalf => Some(if t <= 0.0 {
                0.0
            } else if t >= 1.0 {
                1.0
            } else {
                1.0 - sqrt(1.0 - t)
            }),
            ReferenceLaw::Uniform { lo, hi } => Some(((t - lo) / (hi - lo)).clamp(0.0, 1.0)),
            ReferenceLaw::LoopLaw { .. } => None,
        }
    }
}

/// The limit law of `stat` for maps with `n` edges, together with the scale
/// the statistic is divided by before comparing.
pub fn limit_law(stat: Statistic, n: usize, loop_moments: Option<Vec<f64>>) -> (ReferenceLaw, f64) {
    let nf = n.max(1) as f64;
    match stat {
        Statistic::Leaves => (ReferenceLaw::Poisson { lambda: 1.0 }, 1.0),
        Statistic::RootIsthmic => (ReferenceLaw::ShiftedGeometric { p: 0.5 }, 1.0),
        Statistic::Vertices => {
            let l = log(nf);
            (
                ReferenceLaw::Normal {
                    mean: l,
                    sd: sqrt(l),
                },
                1.0,
            )
        }
        Statistic::RootEdges => (ReferenceLaw::BetaOneHalf, nf),
        Statistic::RootDegree => (ReferenceLaw::Uniform { lo: 0.0, hi: 2.0 }, nf),
        Statistic::Loops => (
            ReferenceLaw::LoopLaw {
                moments: loop_moments.unwrap_or_default(),
            },
            nf,
        ),
    }
}

/// `½ Σ |p - q|` over the union of supports.
pub fn tv_distance(p: &DiscreteDist, q: &DiscreteDist) -> f64 {
    0.5 * joint_support(p, q)
        .map(|k| fabs(p.prob(k) - q.prob(k)))
        .sum::<f64>()
}

fn joint_support(p: &DiscreteDist, q: &DiscreteDist) -> impl Iterator<Item = i64> {
    let mut values: Vec<i64> = p.points.iter().chain(&q.points).map(|&(k, _)| k).collect();
    values.sort_unstable();
    values.dedup();
    values.into_iter()
}

/// Total variation to a discrete law. The law's mass outside the support of
/// `p` counts in full.
pub fn tv_distance_to_law(p: &DiscreteDist, law: &ReferenceLaw) -> Result<f64, StatsError> {
    if !law.is_discrete() {
        return Err(StatsError::NotDiscrete);
    }
    let mut sum = 0.0;
    let mut covered = 0.0;
    for &(k, pk) in &p.points {
        let qk = law.pmf(k).expect("discrete");
        covered += qk;
        sum += fabs(pk - qk);
    }
    Ok(0.5 * (sum + (1.0 - covered).max(0.0)))
}

/// Kolmogorov–Smirnov distance between `p` scaled by `1/scale` and `law`:
/// `sup_t |P(K/scale <= t) - F(t)|`. For a step cdf against a continuous or
/// step cdf the supremum is reached at a jump, approached from either side.
pub fn ks_distance(p: &DiscreteDist, scale: f64, law: &ReferenceLaw) -> Result<f64, StatsError> {
    law.cdf(0.0).ok_or(StatsError::NoCdf)?;
    let mut best: f64 = 0.0;
    let mut below = 0.0;
    for &(k, pk) in &p.points {
        let t = k as f64 / scale;
        let f = law.cdf(t).expect("checked above");
        // left limit of the law's cdf at t matters only for discrete laws
        let f_left = if law.is_discrete() && k as f64 == libm::floor(t) {
            law.cdf(t - 0.5).unwrap_or(f)
        } else {
            f
        };
        best = best.max(fabs(below - f_left));
        below += pk;
        best = best.max(fabs(below - f));
    }
    Ok(best)
}

/// KS distance between two distributions on the same integer lattice.
pub fn ks_between(p: &DiscreteDist, q: &DiscreteDist) -> f64 {
    let (mut fp, mut fq, mut best) = (0.0, 0.0, 0.0f64);
    for k in joint_support(p, q) {
        fp += p.prob(k);
        fq += q.prob(k);
        best = best.max(fabs(fp - fq));
    }
    best
}

/// Exact checks of `E[v^{X_n}] ~ 2^{v-1} n^{v-1} / Γ(v)` at `v = 2, 3`,
/// plus the mean and variance of the vertex count.
#[derive(Clone, Debug, PartialEq)]
pub struct VertexReport {
    pub n: usize,
    /// `E[2^{X_n}]`
    pub exp2: BigRat,
    /// `E[3^{X_n}]`
    pub exp3: BigRat,
    /// `E[2^{X_n}] / (2n)`
    pub ratio2: BigRat,
    /// `E[3^{X_n}] / (2n^2)`
    pub ratio3: BigRat,
    pub mean: BigRat,
    pub variance: BigRat,
}

impl VertexReport {
    pub fn deviation2(&self) -> f64 {
        fabs(self.ratio2.to_f64().unwrap_or(f64::NAN) - 1.0)
    }

    pub fn deviation3(&self) -> f64 {
        fabs(self.ratio3.to_f64().unwrap_or(f64::NAN) - 1.0)
    }

    pub fn variance_over_mean(&self) -> f64 {
        (&self.variance / &self.mean).to_f64().unwrap_or(f64::NAN)
    }
}

pub fn standardized_vertex_check(
    vertices: &DistTable,
    n: usize,
) -> Result<VertexReport, StatsError> {
    if vertices.statistic() != Statistic::Vertices {
        return Err(StatsError::Invalid("needs the vertices table"));
    }
    let row = vertices.row(n)?;
    let total = row.sum();
    let pgf = |v: i64| {
        BigRat::new(
            row.eval(&BigInt::from(v)).expect("univariate"),
            total.clone(),
        )
    };
    let exp2 = pgf(2);
    let exp3 = pgf(3);
    let n_rat = BigRat::from_integer(BigInt::from(n.max(1)));
    let two = BigRat::from_integer(BigInt::from(2));
    let ratio2 = &exp2 / (&two * &n_rat);
    let ratio3 = &exp3 / (&two * &n_rat * &n_rat);
    let (mean, variance) = exact_mean_var(vertices, n)?;
    Ok(VertexReport {
        n,
        exp2,
        exp3,
        ratio2,
        ratio3,
        mean,
        variance,
    })
}

/// `E[(Y_n / n)^ℓ]` against its limit `η_{0,ℓ} / η_{0,0}`.
#[derive(Clone, Debug, PartialEq)]
pub struct LoopMoment {
    pub order: usize,
    pub exact: BigRat,
    pub limit: BigRat,
}

impl LoopMoment {
    pub fn deviation(&self) -> f64 {
        (&self.exact - &self.limit).to_f64().map_or(f64::NAN, fabs)
    }
}

pub fn loop_moment_check(
    loops: &DistTable,
    eta: &MomentTriangle,
    n: usize,
    max_order: usize,
) -> Result<Vec<LoopMoment>, StatsError> {
    if !loops.statistic().is_joint() {
        return Err(GfError::NotLoopsTable(loops.statistic()).into());
    }
    let margin = loops.row(n)?.eval_at_one(Var::V).expect("bivariate");
    let dist = ExactDist::from_counts(margin.univariate_coeffs().expect("univariate"))?;
    let scale = BigRat::from_integer(BigInt::from(n.max(1)));
    let eta00 = eta
        .get(0, 0)
        .ok_or(StatsError::TriangleTooSmall(0))?
        .clone();
    (1..=max_order)
        .map(|order| {
            let limit = eta
                .get(0, order)
                .ok_or(StatsError::TriangleTooSmall(order))?
                / &eta00;
            Ok(LoopMoment {
                order,
                exact: dist.moment(order, &scale),
                limit,
            })
        })
        .collect()
}

/// `[z^n] ∂_w^ℓ Y|_{v=w=1}`: the ℓ-th factorial moment of the loop count
/// times `m_n`. Exposed for cross-checking the raw moments.
pub fn loop_factorial_sum(loops: &DistTable, n: usize, order: usize) -> Result<BigInt, StatsError> {
    let margin = loops.marginal(n)?;
    Ok(margin
        .iter()
        .enumerate()
        .map(|(j, c)| c * falling_factorial(j, order))
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfengine::{dist_series, eta_triangle};
    use alloc::vec;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> BigRat {
        BigRat::new(BigInt::from(n), BigInt::from(d))
    }

    fn dist(points: &[(i64, f64)]) -> DiscreteDist {
        DiscreteDist::new(points.to_vec()).unwrap()
    }

    #[test]
    fn table_dists_sum_to_one() {
        for stat in Statistic::ALL {
            let t = dist_series(stat, 6);
            for n in 0..=6 {
                assert_eq!(ExactDist::from_table(&t, n).unwrap().total(), BigRat::one());
            }
        }
    }

    #[test]
    fn tv_examples() {
        let p = dist(&[(0, 0.25), (1, 0.75)]);
        assert_eq!(tv_distance(&p, &p), 0.0);
        assert_eq!(tv_distance(&dist(&[(0, 1.0)]), &dist(&[(1, 1.0)])), 1.0);
        // c_2 = 3 + 6v + v^2 against Geom(1/2) on k >= 1:
        // ½ (3/10 + 1/10 + 3/20 + Σ_{k>=3} 2^{-k}) = ½ (0.55 + 0.25) = 0.4
        let c2 = ExactDist::from_counts(&[3, 6, 1].map(BigInt::from))
            .unwrap()
            .to_float();
        let tv = tv_distance_to_law(&c2, &ReferenceLaw::ShiftedGeometric { p: 0.5 }).unwrap();
        assert!((tv - 0.4).abs() < 1e-12, "{tv}");
        assert_eq!(
            tv_distance_to_law(&c2, &ReferenceLaw::BetaOneHalf),
            Err(StatsError::NotDiscrete)
        );
    }

    #[test]
    fn ks_examples() {
        // root degree at n = 1: {1: 1/2, 2: 1/2} scaled by 1 vs Uniform[0, 2].
        // Step cdf 0 | 1/2 | 1 against t/2: the gap is 1/2 just below t = 1.
        let d1 = dist(&[(1, 0.5), (2, 0.5)]);
        let ks = ks_distance(&d1, 1.0, &ReferenceLaw::Uniform { lo: 0.0, hi: 2.0 }).unwrap();
        assert!((ks - 0.5).abs() < 1e-12);
        let law = ReferenceLaw::LoopLaw {
            moments: vec![1.0, 0.5],
        };
        assert_eq!(ks_distance(&d1, 1.0, &law), Err(StatsError::NoCdf));
        // a fine lattice sampled at the uniform law's own quantiles
        let m = 1000;
        let grid = DiscreteDist::new((1..=m).map(|k| (k, 1.0 / m as f64)).collect()).unwrap();
        let ks = ks_distance(
            &grid,
            m as f64 / 2.0,
            &ReferenceLaw::Uniform { lo: 0.0, hi: 2.0 },
        )
        .unwrap();
        assert!(ks <= 1.0 / m as f64 + 1e-12, "{ks}");
        // a discrete law against itself
        let geo = ReferenceLaw::ShiftedGeometric { p: 0.5 };
        let exact = DiscreteDist::new(
            (1..60)
                .map(|k| (k, geo.pmf(k).unwrap()))
                .chain([(60, pow(0.5, 59.0))])
                .collect(),
        )
        .unwrap();
        assert!(ks_distance(&exact, 1.0, &geo).unwrap() < 1e-12);
    }

    #[test]
    fn law_basics() {
        let poisson = ReferenceLaw::Poisson { lambda: 1.0 };
        assert!((poisson.pmf(0).unwrap() - exp(-1.0)).abs() < 1e-15);
        assert!((poisson.pmf(3).unwrap() - exp(-1.0) / 6.0).abs() < 1e-15);
        assert_eq!(ReferenceLaw::BetaOneHalf.cdf(0.75), Some(0.5));
        assert_eq!(
            ReferenceLaw::Uniform { lo: 0.0, hi: 2.0 }.cdf(0.5),
            Some(0.25)
        );
        let normal = ReferenceLaw::Normal { mean: 1.0, sd: 2.0 };
        assert!((normal.cdf(1.0).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(
            ReferenceLaw::ShiftedGeometric { p: 0.5 }.cdf(2.0),
            Some(0.75)
        );
    }

    #[test]
    fn vertex_report_small() {
        let x = dist_series(Statistic::Vertices, 2);
        let r = standardized_vertex_check(&x, 2).unwrap();
        assert_eq!(r.exp2, rat(42, 10));
        assert_eq!(r.ratio2, rat(21, 20));
        // E[1^X] = 1
        let row = x.row(2).unwrap();
        assert_eq!(row.eval(&BigInt::one()).unwrap(), row.sum());
    }

    #[test]
    fn loop_moments_small() {
        let loops = dist_series(Statistic::Loops, 2);
        let eta = eta_triangle(0, 3);
        let report = loop_moment_check(&loops, &eta, 2, 2).unwrap();
        // y_2(1, w) = 3 + 4w + 3w^2: E[Y/2] = (4 + 6)/10/2 = 1/2
        assert_eq!(report[0].exact, rat(1, 2));
        assert_eq!(report[0].limit, rat(1, 2));
        assert_eq!(report[1].limit, rat(7, 24));
        assert_eq!(loop_factorial_sum(&loops, 2, 1).unwrap(), BigInt::from(10));
        assert!(matches!(
            loop_moment_check(&loops, &eta, 2, 9),
            Err(StatsError::TriangleTooSmall(4))
        ));
    }

    #[test]
    fn invalid_dists() {
        assert!(DiscreteDist::new(vec![(0, 0.5)]).is_err());
        assert!(DiscreteDist::new(vec![(0, -0.5), (1, 1.5)]).is_err());
        assert!(DiscreteDist::from_histogram(&[]).is_err());
        assert!(ExactDist::from_counts(&[BigInt::ZERO]).is_err());
        let merged = DiscreteDist::new(vec![(1, 0.25), (0, 0.5), (1, 0.25)]).unwrap();
        assert_eq!(merged.points(), &[(0, 0.5), (1, 0.5)]);
    }

    fn arb_dist() -> impl Strategy<Value = DiscreteDist> {
        proptest::collection::vec(1u64..50, 1..8).prop_map(|w| {
            let hist: Vec<(i64, u64)> = w
                .into_iter()
                .enumerate()
                .map(|(k, c)| (k as i64, c))
                .collect();
            DiscreteDist::from_histogram(&hist).unwrap()
        })
    }

    proptest! {
        #[test]
        fn tv_is_a_metric(p in arb_dist(), q in arb_dist(), r in arb_dist()) {
            let pq = tv_distance(&p, &q);
            prop_assert!((pq - tv_distance(&q, &p)).abs() < 1e-12);
            prop_assert!((0.0..=1.0 + 1e-12).contains(&pq));
            prop_assert!(tv_distance(&p, &p) < 1e-12);
            prop_assert!(tv_distance(&p, &r) <= pq + tv_distance(&q, &r) + 1e-12);
        }

        #[test]
        fn ks_is_a_metric(p in arb_dist(), q in arb_dist(), r in arb_dist()) {
            let pq = ks_between(&p, &q);
            prop_assert!((pq - ks_between(&q, &p)).abs() < 1e-12);
            prop_assert!(ks_between(&p, &p) < 1e-12);
            prop_assert!(ks_between(&p, &r) <= pq + ks_between(&q, &r) + 1e-12);
            // KS never exceeds TV
            prop_assert!(pq <= tv_distance(&p, &q) + 1e-12);
        }
    }
}
