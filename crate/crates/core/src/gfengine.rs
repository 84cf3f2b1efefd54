//! Coefficient recurrences for the map generating functions.
//!
//! Each statistic's functional equation is translated by hand into a
//! recurrence on the rows `row_n(v) = [z^n] F(z, v)`. Two facts do all the
//! work: `[z^n] z G = g_{n-1}` and `[z^n] 2 z^2 ∂_z F = 2(n-1) f_{n-1}`.
//! Every term of every equation below is written out separately so that the
//! recurrence can be read against its equation line by line.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_traits::{One, Pow, Zero};

use crate::algebra::{
    binomial, factorial, falling_factorial, shift_by_one, BigInt, BigPoly, BigRat, RatPoly, Var,
};

/// Largest `n` for which the bivariate tables are routinely computed.
pub const BIVARIATE_MAX_N: usize = 200;
/// Largest `n` for the trivariate loops table (cost grows like `n^5`).
pub const TRIVARIATE_MAX_N: usize = 100;

/// The six map statistics that have a generating-function description.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Statistic {
    Vertices,
    Leaves,
    Loops,
    RootEdges,
    RootDegree,
    RootIsthmic,
}

impl Statistic {
    pub const ALL: [Statistic; 6] = [
        Statistic::Vertices,
        Statistic::Leaves,
        Statistic::Loops,
        Statistic::RootEdges,
        Statistic::RootDegree,
        Statistic::RootIsthmic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Statistic::Vertices => "vertices",
            Statistic::Leaves => "leaves",
            Statistic::Loops => "loops",
            Statistic::RootEdges => "root_edges",
            Statistic::RootDegree => "root_degree",
            Statistic::RootIsthmic => "root_isthmic",
        }
    }

    /// The loops table is bivariate in (root degree, loops); the rest are
    /// univariate.
    pub fn is_joint(self) -> bool {
        self == Statistic::Loops
    }
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Statistic {
    type Err = GfError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "vertices" => Statistic::Vertices,
            "leaves" => Statistic::Leaves,
            "loops" => Statistic::Loops,
            "root_edges" => Statistic::RootEdges,
            "root_degree" => Statistic::RootDegree,
            "root_isthmic" | "isthmic" | "root_isthmic_parts" => Statistic::RootIsthmic,
            other => return Err(GfError::UnknownStatistic(other.to_string())),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum GfError {
    #[error("unknown statistic `{0}`")]
    UnknownStatistic(String),
    #[error("row {n} is not in the table (computed up to {max_n})")]
    RowAbsent { n: usize, max_n: usize },
    #[error("operation needs the joint loops table, got {0}")]
    NotLoopsTable(Statistic),
    #[error("ratio undefined for n = 0")]
    ZeroSize,
}

/// `m_0 ..= m_N`, the number of rooted maps with `n` edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapCounts(Vec<BigInt>);

impl MapCounts {
    pub fn get(&self, n: usize) -> Option<&BigInt> {
        self.0.get(n)
    }

    pub fn as_slice(&self) -> &[BigInt] {
        &self.0
    }

    pub fn max_n(&self) -> usize {
        self.0.len() - 1
    }
}

/// `m_n = [n=0] + Σ_{k<n} m_k m_{n-1-k} + (2n-1) m_{n-1}`.
pub fn map_counts(max_n: usize) -> MapCounts {
    let mut m: Vec<BigInt> = Vec::with_capacity(max_n + 1);
    m.push(BigInt::one());
    for n in 1..=max_n {
        let isthmus: BigInt = (0..n).map(|k| &m[k] * &m[n - 1 - k]).sum();
        let insert = &m[n - 1] * BigInt::from(2 * n - 1);
        m.push(isthmus + insert);
    }
    MapCounts(m)
}

/// `φ_n = (2n-1)!!`, the number of perfect matchings on `2n` points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiSeries(Vec<BigInt>);

impl PhiSeries {
    pub fn get(&self, n: usize) -> Option<&BigInt> {
        self.0.get(n)
    }

    pub fn as_slice(&self) -> &[BigInt] {
        &self.0
    }
}

pub fn phi_series(max_n: usize) -> PhiSeries {
    let mut phi = Vec::with_capacity(max_n + 1);
    phi.push(BigInt::one());
    for n in 0..max_n {
        let next = &phi[n] * BigInt::from(2 * n + 1);
        phi.push(next);
    }
    PhiSeries(phi)
}

/// Which functional equation to use for the joint (root degree, loops) table.
///
/// Only [`LoopsEquation::Corrected`] matches the maps themselves. The loop map
/// and the link map give `y_1 = v + v^2 w`, whereas the two alternative forms give
/// `2v` and `v^2 + v^3 w`. They are kept so the discrepancy stays
/// reproducible.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LoopsEquation {
    /// `Y = 1 + z v^2 w Y + z v Y|_{v=1} Y + 2 z^2 v ∂_z Y + z v^2 (v w - 1) ∂_v Y`
    #[default]
    Corrected,
    /// `Y = 1 + z v Y + z v Y|_{v=1} Y + 2 z^2 v ∂_z Y + z v^2 (v w - 1) ∂_v Y`
    UnmarkedLoop,
    /// `Y = v + v z Y + v z Y|_{v=1} Y + 2 v z^2 ∂_z Y + v^2 z (v w - 1) ∂_v Y`
    ShiftedConstant,
}

/// Exact distribution rows `row_0 ..= row_N` of one statistic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistTable {
    stat: Statistic,
    rows: Vec<BigPoly>,
}

impl DistTable {
    pub fn statistic(&self) -> Statistic {
        self.stat
    }

    pub fn rows(&self) -> &[BigPoly] {
        &self.rows
    }

    pub fn max_n(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn row(&self, n: usize) -> Result<&BigPoly, GfError> {
        self.rows.get(n).ok_or(GfError::RowAbsent {
            n,
            max_n: self.max_n(),
        })
    }

    /// Counts of the statistic itself: `count[k]` maps with value `k`. For
    /// the joint loops table this is the loops marginal `y_n(1, w)`.
    pub fn marginal(&self, n: usize) -> Result<Vec<BigInt>, GfError> {
        let row = self.row(n)?;
        let uni = if self.stat.is_joint() {
            row.eval_at_one(Var::V).expect("bivariate row")
        } else {
            row.clone()
        };
        Ok(uni.univariate_coeffs().expect("univariate").to_vec())
    }
}

// Univariate row helpers: rows are plain coefficient vectors while the table
// is being built.

fn add_scaled(acc: &mut Vec<BigInt>, src: &[BigInt], shift: usize, scale: &BigInt) {
    if scale.is_zero() {
        return;
    }
    if acc.len() < src.len() + shift {
        acc.resize(src.len() + shift, BigInt::ZERO);
    }
    for (i, c) in src.iter().enumerate() {
        if !c.is_zero() {
            acc[i + shift] += c * scale;
        }
    }
}

fn add_product(acc: &mut Vec<BigInt>, a: &[BigInt], b: &[BigInt], shift: usize) {
    if a.is_empty() || b.is_empty() {
        return;
    }
    if acc.len() < a.len() + b.len() - 1 + shift {
        acc.resize(a.len() + b.len() - 1 + shift, BigInt::ZERO);
    }
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                acc[i + j + shift] += x * y;
            }
        }
    }
}

/// `Σ_{k<n} rows[k] · rows[n-1-k]`, pairing `k` with `n-1-k` so that each
/// distinct product is computed once.
fn add_self_convolution(acc: &mut Vec<BigInt>, rows: &[Vec<BigInt>], n: usize) {
    let mut pairs = Vec::new();
    for k in 0..n / 2 {
        add_product(&mut pairs, &rows[k], &rows[n - 1 - k], 0);
    }
    add_scaled(acc, &pairs, 0, &BigInt::from(2));
    if n % 2 == 1 {
        let mid = &rows[n / 2];
        add_product(acc, mid, mid, 0);
    }
}

/// `∂_v` of a coefficient vector.
fn derivative(p: &[BigInt]) -> Vec<BigInt> {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect()
}

fn total(p: &[BigInt]) -> BigInt {
    p.iter().sum()
}

fn big(n: usize) -> BigInt {
    BigInt::from(n)
}

fn finish(stat: Statistic, rows: Vec<Vec<BigInt>>) -> DistTable {
    DistTable {
        stat,
        rows: rows.into_iter().map(BigPoly::from_coeffs).collect(),
    }
}

/// Exact rows `0 ..= max_n` for `stat`. The loops table uses the corrected
/// equation; see [`loops_series`] for the alternative forms.
pub fn dist_series(stat: Statistic, max_n: usize) -> DistTable {
    match stat {
        Statistic::Vertices => vertices_series(max_n),
        Statistic::Leaves => leaves_series(max_n),
        Statistic::Loops => loops_series(max_n, LoopsEquation::Corrected),
        Statistic::RootEdges => root_edges_series(max_n),
        Statistic::RootDegree => root_degree_series(max_n),
        Statistic::RootIsthmic => root_isthmic_series(max_n),
    }
}

/// `X = v + z X + z X^2 + 2 z^2 ∂_z X`, `v` marking vertices.
fn vertices_series(max_n: usize) -> DistTable {
    let mut rows: Vec<Vec<BigInt>> = vec![vec![BigInt::ZERO, BigInt::one()]];
    for n in 1..=max_n {
        let prev = &rows[n - 1];
        let mut row = Vec::new();
        // z X
        add_scaled(&mut row, prev, 0, &BigInt::one());
        // z X^2
        add_self_convolution(&mut row, &rows, n);
        // 2 z^2 ∂_z X
        add_scaled(&mut row, prev, 0, &big(2 * (n - 1)));
        rows.push(row);
    }
    finish(Statistic::Vertices, rows)
}

/// `L = v + (2 - v) z L + z L^2 + 2 z^2 ∂_z L + z (1 - v) ∂_v L`, `v`
/// marking leaves.
fn leaves_series(max_n: usize) -> DistTable {
    let mut rows: Vec<Vec<BigInt>> = vec![vec![BigInt::ZERO, BigInt::one()]];
    for n in 1..=max_n {
        let prev = &rows[n - 1];
        let mut row = Vec::new();
        // (2 - v) z L
        add_scaled(&mut row, prev, 0, &big(2));
        add_scaled(&mut row, prev, 1, &BigInt::from(-1));
        // z L^2
        add_self_convolution(&mut row, &rows, n);
        // 2 z^2 ∂_z L
        add_scaled(&mut row, prev, 0, &big(2 * (n - 1)));
        // z (1 - v) ∂_v L
        let d = derivative(prev);
        add_scaled(&mut row, &d, 0, &BigInt::one());
        add_scaled(&mut row, &d, 1, &BigInt::from(-1));
        rows.push(row);
    }
    finish(Statistic::Leaves, rows)
}

/// `C = 1 + z C + v z C|_{v=1} C + 2 z^2 ∂_z C`, `v` marking root isthmic
/// parts.
fn root_isthmic_series(max_n: usize) -> DistTable {
    let mut rows: Vec<Vec<BigInt>> = vec![vec![BigInt::one()]];
    let mut at_one: Vec<BigInt> = vec![BigInt::one()];
    for n in 1..=max_n {
        let prev = &rows[n - 1];
        let mut row = Vec::new();
        // z C
        add_scaled(&mut row, prev, 0, &BigInt::one());
        // v z C|_{v=1} C
        for k in 0..n {
            add_scaled(&mut row, &rows[n - 1 - k], 1, &at_one[k]);
        }
        // 2 z^2 ∂_z C
        add_scaled(&mut row, prev, 0, &big(2 * (n - 1)));
        at_one.push(total(&row));
        rows.push(row);
    }
    finish(Statistic::RootIsthmic, rows)
}

/// `E = 1 + v z E + v z E|_{v=1} E + 2 v z^2 ∂_z E`, `v` marking root edges.
fn root_edges_series(max_n: usize) -> DistTable {
    let mut rows: Vec<Vec<BigInt>> = vec![vec![BigInt::one()]];
    let mut at_one: Vec<BigInt> = vec![BigInt::one()];
    for n in 1..=max_n {
        let prev = &rows[n - 1];
        let mut row = Vec::new();
        // v z E
        add_scaled(&mut row, prev, 1, &BigInt::one());
        // v z E|_{v=1} E
        for k in 0..n {
            add_scaled(&mut row, &rows[n - 1 - k], 1, &at_one[k]);
        }
        // 2 v z^2 ∂_z E
        add_scaled(&mut row, prev, 1, &big(2 * (n - 1)));
        at_one.push(total(&row));
        rows.push(row);
    }
    finish(Statistic::RootEdges, rows)
}

/// `D = 1 + v^2 z D + v z D|_{v=1} D + 2 v z^2 ∂_z D - v^2 (1 - v) z ∂_v D`,
/// `v` marking the root vertex degree.
fn root_degree_series(max_n: usize) -> DistTable {
    let mut rows: Vec<Vec<BigInt>> = vec![vec![BigInt::one()]];
    let mut at_one: Vec<BigInt> = vec![BigInt::one()];
    for n in 1..=max_n {
        let prev = &rows[n - 1];
        let mut row = Vec::new();
        // v^2 z D
        add_scaled(&mut row, prev, 2, &BigInt::one());
        // v z D|_{v=1} D
        for k in 0..n {
            add_scaled(&mut row, &rows[n - 1 - k], 1, &at_one[k]);
        }
        // 2 v z^2 ∂_z D
        add_scaled(&mut row, prev, 1, &big(2 * (n - 1)));
        // -v^2 (1 - v) z ∂_v D = (v^3 - v^2) z ∂_v D
        let d = derivative(prev);
        add_scaled(&mut row, &d, 3, &BigInt::one());
        add_scaled(&mut row, &d, 2, &BigInt::from(-1));
        at_one.push(total(&row));
        rows.push(row);
    }
    finish(Statistic::RootDegree, rows)
}

/// Dense `(v, w)` grid used while building the joint loops table.
struct Grid {
    len_w: usize,
    cells: Vec<BigInt>,
}

impl Grid {
    fn new(len_v: usize, len_w: usize) -> Self {
        Grid {
            len_w,
            cells: vec![BigInt::ZERO; len_v * len_w],
        }
    }

    fn at(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.cells[i * self.len_w + j]
    }

    fn terms(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> + '_ {
        let len_w = self.len_w;
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(k, c)| (k / len_w, k % len_w, c))
    }

    /// Coefficients of `Y|_{v=1}` as a polynomial in `w`.
    fn w_marginal(&self) -> Vec<BigInt> {
        let mut out = vec![BigInt::ZERO; self.len_w];
        for (_, j, c) in self.terms() {
            out[j] += c;
        }
        out
    }
}

/// Joint table of (root degree `v`, loops `w`), rows computed from `equation`.
///
/// All three variants share the shape
/// `Y = c_0 + z A Y + z v Y|_{v=1} Y + 2 z^2 v ∂_z Y + z v^2 (v w - 1) ∂_v Y`
/// and differ only in the constant `c_0` and the monomial `A`.
pub fn loops_series(max_n: usize, equation: LoopsEquation) -> DistTable {
    // (v-exponent of c_0, v- and w-exponents of A)
    let (c0_v, a_v, a_w) = match equation {
        LoopsEquation::Corrected => (0, 2, 1),
        LoopsEquation::UnmarkedLoop => (0, 1, 0),
        LoopsEquation::ShiftedConstant => (1, 1, 0),
    };
    let mut grids: Vec<Grid> = Vec::with_capacity(max_n + 1);
    let mut margins: Vec<Vec<BigInt>> = Vec::with_capacity(max_n + 1);
    let mut first = Grid::new(c0_v + 1, 1);
    *first.at(c0_v, 0) = BigInt::one();
    margins.push(first.w_marginal());
    grids.push(first);
    for n in 1..=max_n {
        // v-degree grows by at most 2 per edge, w-degree by at most 1.
        let mut g = Grid::new(2 * n + c0_v + 1, n + 1);
        let prev = &grids[n - 1];
        let shift = BigInt::from(2 * (n - 1));
        for (i, j, c) in prev.terms() {
            // z A Y
            *g.at(i + a_v, j + a_w) += c;
            // 2 z^2 v ∂_z Y
            *g.at(i + 1, j) += c * &shift;
            // z v^2 (v w - 1) ∂_v Y: i·c·(v^{i+2} w^{j+1} - v^{i+1} w^j)
            if i > 0 {
                let ic = c * BigInt::from(i);
                *g.at(i + 1, j) -= &ic;
                *g.at(i + 2, j + 1) += ic;
            }
        }
        // z v Y|_{v=1} Y
        for k in 0..n {
            let margin = &margins[k];
            for (i, j, c) in grids[n - 1 - k].terms() {
                for (l, m) in margin.iter().enumerate() {
                    if !m.is_zero() {
                        *g.at(i + 1, j + l) += c * m;
                    }
                }
            }
        }
        margins.push(g.w_marginal());
        grids.push(g);
    }
    let rows = grids
        .into_iter()
        .map(|g| {
            let len_w = g.len_w;
            let len_v = g.cells.len() / len_w;
            BigPoly::from_raw(2, len_v, len_w, g.cells)
        })
        .collect();
    DistTable {
        stat: Statistic::Loops,
        rows,
    }
}

/// Vertex rows from `X(z, v) = v + z X(z, v) X(z, v + 1)`:
/// `x_n(v) = Σ_{k<n} x_k(v) x_{n-1-k}(v + 1)`.
pub fn vertices_alt_series(max_n: usize) -> DistTable {
    let mut rows: Vec<Vec<BigInt>> = vec![vec![BigInt::ZERO, BigInt::one()]];
    let mut shifted: Vec<Vec<BigInt>> = vec![shift_by_one(&rows[0])];
    for n in 1..=max_n {
        let mut row = Vec::new();
        for k in 0..n {
            add_product(&mut row, &rows[k], &shifted[n - 1 - k], 0);
        }
        shifted.push(shift_by_one(&row));
        rows.push(row);
    }
    finish(Statistic::Vertices, rows)
}

/// `s_n(v) = Π_{k=1}^{n} (2k + v - 2)(2k + v - 1) / (2k)`, the linearising
/// series for the vertex equation (`X = v + 2 z S' / S`).
pub fn s_closed(n: usize) -> RatPoly {
    let den = Pow::pow(big(2), n) * factorial(n);
    let num = s_numerators(n).pop().expect("nonempty");
    RatPoly::new(
        num.univariate_coeffs()
            .expect("univariate")
            .iter()
            .map(|c| BigRat::new(c.clone(), den.clone()))
            .collect(),
    )
}

/// `2^k k! s_k(v) = (v)(v + 1)...(v + 2k - 1)` for `k = 0..=n`.
pub fn s_numerators(n: usize) -> Vec<BigPoly> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = vec![BigInt::one()];
    out.push(BigPoly::from_coeffs(acc.clone()));
    for j in 0..2 * n {
        // acc *= v + j
        acc.push(BigInt::ZERO);
        for i in (0..acc.len()).rev() {
            let lower = if i > 0 {
                acc[i - 1].clone()
            } else {
                BigInt::ZERO
            };
            acc[i] = &acc[i] * big(j) + lower;
        }
        if j % 2 == 1 {
            out.push(BigPoly::from_coeffs(acc.clone()));
        }
    }
    out
}

/// `q_n(v) = φ_n (1 + v + ... + v^{2n})`, the coefficients of `φ(z) D(z, v)`.
pub fn q_degree_closed(n: usize) -> BigPoly {
    let phi = phi_series(n).0.pop().expect("nonempty");
    BigPoly::from_coeffs(vec![phi; 2 * n + 1])
}

/// `q_n(v) = 2^n n! Σ_{j=0}^{n} C(2j, j) 4^{-j} v^{n-j}`, the coefficients of
/// `φ(z) E(z, v)`.
pub fn q_edges_closed(n: usize) -> BigPoly {
    let scale = BigRat::from_integer(Pow::pow(big(2), n) * factorial(n));
    let mut coeffs = vec![BigRat::zero(); n + 1];
    for j in 0..=n {
        let c = BigRat::new(binomial(2 * j, j), Pow::pow(big(4), j));
        coeffs[n - j] = &scale * c;
    }
    RatPoly::new(coeffs)
        .to_integer()
        .expect("q_n(v) has integer coefficients")
}

/// `Σ_{k=0}^{n} φ_k row_{n-k}(v)`: the coefficients of `φ(z) F(z, v)` for a
/// univariate table.
pub fn phi_convolve(table: &DistTable, phi: &PhiSeries, n: usize) -> Result<BigPoly, GfError> {
    table.row(n)?;
    let mut acc = Vec::new();
    for k in 0..=n {
        let row = table.marginal(n - k)?;
        add_scaled(&mut acc, &row, 0, &phi.0[k]);
    }
    Ok(BigPoly::from_coeffs(acc))
}

/// `Σ_{k=0}^{n-1} s_k(v) x_{n-k}(v)` for the vertices table; equals
/// `2n s_n(v)` whenever `X = v + 2 z S' / S`. Summed over integers as
/// `Σ P_k x_{n-k} 2^{n-k} n!/k!` with `P_k = 2^k k! s_k`, then divided once.
pub fn s_convolve(vertices: &DistTable, n: usize) -> Result<RatPoly, GfError> {
    vertices.row(n)?;
    let numerators = s_numerators(n);
    let mut acc: Vec<BigInt> = Vec::new();
    for (k, p) in numerators.iter().enumerate().take(n) {
        let weight = Pow::pow(big(2), n - k) * falling_factorial(n, n - k);
        let term = p.checked_mul(vertices.row(n - k)?).expect("univariate");
        add_scaled(
            &mut acc,
            term.univariate_coeffs().expect("univariate"),
            0,
            &weight,
        );
    }
    let den = Pow::pow(big(2), n) * factorial(n);
    Ok(RatPoly::new(
        acc.into_iter()
            .map(|c| BigRat::new(c, den.clone()))
            .collect(),
    ))
}

/// Limits `η_{k,ℓ}` of `[z^n] ∂_v^k ∂_w^ℓ Y|_{v=w=1} / (n^{k+ℓ+1} φ_n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentTriangle {
    max_total: usize,
    // entries[k][l] for k + l <= max_total
    entries: Vec<Vec<BigRat>>,
}

impl MomentTriangle {
    /// `η_{k,ℓ}`, or `None` outside the computed triangle.
    pub fn get(&self, k: usize, l: usize) -> Option<&BigRat> {
        self.entries.get(k).and_then(|row| row.get(l))
    }

    /// Entries are stored for every `k + ℓ <= max_total`.
    pub fn max_total(&self) -> usize {
        self.max_total
    }
}

/// `η_{0,0} = 2` and, for `k + ℓ > 0`,
/// `η_{k,ℓ} = (2k η_{k-1,ℓ} + ℓ η_{k+1,ℓ-1}) / (k + 2ℓ + [k > 0])`.
///
/// `η_{k,ℓ}` reaches up to `η_{k+ℓ,0}`, so the triangle is filled by total
/// degree `t = k + ℓ`, and within a degree by decreasing `k`.
pub fn eta_triangle(k_max: usize, l_max: usize) -> MomentTriangle {
    let max_total = k_max + l_max;
    let mut entries: Vec<Vec<BigRat>> = (0..=max_total)
        .map(|k| vec![BigRat::zero(); max_total - k + 1])
        .collect();
    entries[0][0] = BigRat::from_integer(big(2));
    for t in 1..=max_total {
        for k in (0..=t).rev() {
            let l = t - k;
            let mut num = BigRat::zero();
            if k > 0 {
                num += BigRat::from_integer(big(2 * k)) * &entries[k - 1][l];
            }
            if l > 0 {
                num += BigRat::from_integer(big(l)) * &entries[k + 1][l - 1];
            }
            let den = k + 2 * l + usize::from(k > 0);
            entries[k][l] = num / BigRat::from_integer(big(den));
        }
    }
    MomentTriangle { max_total, entries }
}

/// Exact mean and variance of the statistic over maps with `n` edges. The
/// variance comes from the second factorial moment,
/// `Var = E[K(K-1)] + E[K] - E[K]^2`.
pub fn exact_mean_var(table: &DistTable, n: usize) -> Result<(BigRat, BigRat), GfError> {
    let counts = table.marginal(n)?;
    let total = BigRat::from_integer(total(&counts));
    let factorial_moment = |order: usize| -> BigRat {
        let s: BigInt = counts
            .iter()
            .enumerate()
            .map(|(k, c)| c * falling_factorial(k, order))
            .sum();
        BigRat::from_integer(s) / &total
    };
    let mean = factorial_moment(1);
    let var = factorial_moment(2) + &mean - &mean * &mean;
    Ok((mean, var))
}

/// `[z^n] ∂_v^k ∂_w^ℓ Y|_{v=w=1} / (n^{k+ℓ+1} φ_n)`, computed from the joint
/// loops table. Tends to `η_{k,ℓ}`.
pub fn finite_eta_ratio(
    loops: &DistTable,
    k: usize,
    l: usize,
    n: usize,
) -> Result<BigRat, GfError> {
    if !loops.statistic().is_joint() {
        return Err(GfError::NotLoopsTable(loops.statistic()));
    }
    if n == 0 {
        return Err(GfError::ZeroSize);
    }
    let row = loops.row(n)?;
    let derivative: BigInt = row
        .terms()
        .map(|(i, j, c)| c * falling_factorial(i, k) * falling_factorial(j, l))
        .sum();
    let phi = phi_series(n).0.pop().expect("nonempty");
    let scale = Pow::pow(big(n), k + l + 1) * phi;
    Ok(BigRat::new(derivative, scale))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(c: &[i64]) -> Vec<BigInt> {
        c.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn poly(c: &[i64]) -> BigPoly {
        BigPoly::from_i64s(c)
    }

    fn rat(n: i64, d: i64) -> BigRat {
        BigRat::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn map_counts_examples() {
        assert_eq!(map_counts(1).as_slice(), &ints(&[1, 2])[..]);
        assert_eq!(
            map_counts(6).as_slice(),
            &ints(&[1, 2, 10, 74, 706, 8162, 110410])[..]
        );
        let m = map_counts(4);
        let phi = phi_series(4);
        let r = rat(706, 105);
        assert_eq!(ratio_of(&m.0[4], &phi.0[4]), r);
    }

    fn ratio_of(a: &BigInt, b: &BigInt) -> BigRat {
        BigRat::new(a.clone(), b.clone())
    }

    #[test]
    fn phi_examples() {
        let phi = phi_series(4);
        assert_eq!(phi.as_slice(), &ints(&[1, 1, 3, 15, 105])[..]);
        // (2n)! / (2^n n!)
        for n in 0..=4 {
            assert_eq!(
                phi.0[n],
                factorial(2 * n) / (Pow::pow(big(2), n) * factorial(n))
            );
        }
    }

    #[test]
    fn small_rows() {
        assert_eq!(
            dist_series(Statistic::Vertices, 2).rows[2],
            poly(&[0, 3, 5, 2])
        );
        assert_eq!(
            dist_series(Statistic::RootDegree, 2).rows[2],
            poly(&[0, 2, 2, 3, 3])
        );
        assert_eq!(
            dist_series(Statistic::RootIsthmic, 2).rows[2],
            poly(&[3, 6, 1])
        );
        assert_eq!(dist_series(Statistic::Leaves, 2).rows[2], poly(&[5, 4, 1]));
        assert_eq!(dist_series(Statistic::Leaves, 1).rows[1], poly(&[1, 1]));
        assert_eq!(dist_series(Statistic::RootEdges, 1).rows[1], poly(&[0, 2]));
        let loops = dist_series(Statistic::Loops, 2);
        let y1 = BigPoly::from_grid(vec![vec![], ints(&[1]), ints(&[0, 1])]);
        assert_eq!(loops.rows[1], y1);
        assert_eq!(loops.rows[2].eval_at_one(Var::V).unwrap(), poly(&[3, 4, 3]));
    }

    #[test]
    fn zero_rows() {
        assert_eq!(dist_series(Statistic::Vertices, 0).rows[0], poly(&[0, 1]));
        assert_eq!(dist_series(Statistic::Leaves, 0).rows[0], poly(&[0, 1]));
        for s in [
            Statistic::RootEdges,
            Statistic::RootDegree,
            Statistic::RootIsthmic,
        ] {
            assert_eq!(dist_series(s, 0).rows[0], poly(&[1]));
        }
    }

    #[test]
    fn alternative_loops_forms_fail_at_one_edge() {
        let corrected = BigPoly::from_grid(vec![vec![], ints(&[1]), ints(&[0, 1])]);
        let body = loops_series(1, LoopsEquation::UnmarkedLoop);
        assert_eq!(body.rows[1], BigPoly::from_grid(vec![vec![], ints(&[2])]));
        let table = loops_series(1, LoopsEquation::ShiftedConstant);
        assert_eq!(
            table.rows[1],
            BigPoly::from_grid(vec![vec![], vec![], ints(&[1]), ints(&[0, 1])])
        );
        assert_ne!(body.rows[1], corrected);
        assert_ne!(table.rows[1], corrected);
    }

    #[test]
    fn marginals_sum_to_map_counts() {
        let n = 30;
        let m = map_counts(n);
        for stat in Statistic::ALL {
            let t = dist_series(stat, if stat.is_joint() { 15 } else { n });
            for (k, row) in t.rows().iter().enumerate() {
                assert_eq!(row.sum(), m.0[k], "{stat} n={k}");
                assert!(row.is_nonnegative());
            }
        }
    }

    #[test]
    fn unknown_statistic() {
        assert_eq!(
            "genus".parse::<Statistic>(),
            Err(GfError::UnknownStatistic("genus".into()))
        );
        assert_eq!("isthmic".parse::<Statistic>(), Ok(Statistic::RootIsthmic));
        for s in Statistic::ALL {
            assert_eq!(s.name().parse::<Statistic>(), Ok(s));
        }
    }

    #[test]
    fn vertices_alt_examples() {
        let t = vertices_alt_series(2);
        assert_eq!(t.rows[0], poly(&[0, 1]));
        assert_eq!(t.rows[1], poly(&[0, 1, 1]));
        assert_eq!(t.rows[2], poly(&[0, 3, 5, 2]));
        assert_eq!(
            vertices_alt_series(25),
            dist_series(Statistic::Vertices, 25)
        );
    }

    #[test]
    fn s_closed_examples() {
        assert_eq!(s_closed(0), RatPoly::new(vec![BigRat::one()]));
        let half = rat(1, 2);
        assert_eq!(
            s_closed(1),
            RatPoly::new(vec![BigRat::zero(), half.clone(), half])
        );
        // 4 s_2 = v(v+1)(v+2)(v+3)/2
        let four_s2 = s_closed(2).scale(&BigRat::from_integer(big(4)));
        let rising = RatPoly::from_int(&poly(&[0, 6, 11, 6, 1]))
            .unwrap()
            .scale(&rat(1, 2));
        assert_eq!(four_s2, rising);
    }

    #[test]
    fn s_identity_small_n() {
        let x = dist_series(Statistic::Vertices, 12);
        for n in 1..=12 {
            let rhs = s_closed(n).scale(&BigRat::from_integer(big(2 * n)));
            assert_eq!(s_convolve(&x, n).unwrap(), rhs, "n={n}");
        }
    }

    #[test]
    fn q_closed_examples() {
        assert_eq!(q_degree_closed(0), poly(&[1]));
        assert_eq!(q_degree_closed(1), poly(&[1, 1, 1]));
        assert_eq!(q_degree_closed(2), poly(&[3, 3, 3, 3, 3]));
        assert_eq!(q_edges_closed(0), poly(&[1]));
        assert_eq!(q_edges_closed(1), poly(&[1, 2]));
        assert_eq!(q_edges_closed(2), poly(&[3, 4, 8]));
    }

    #[test]
    fn deconvolutions_small_n() {
        let phi = phi_series(20);
        let d = dist_series(Statistic::RootDegree, 20);
        let e = dist_series(Statistic::RootEdges, 20);
        for n in 0..=20 {
            assert_eq!(
                phi_convolve(&d, &phi, n).unwrap(),
                q_degree_closed(n),
                "degree n={n}"
            );
            assert_eq!(
                phi_convolve(&e, &phi, n).unwrap(),
                q_edges_closed(n),
                "edges n={n}"
            );
        }
    }

    #[test]
    fn eta_examples() {
        let eta = eta_triangle(10, 3);
        assert_eq!(eta.get(0, 0), Some(&rat(2, 1)));
        assert_eq!(eta.get(1, 0), Some(&rat(2, 1)));
        assert_eq!(eta.get(0, 1), Some(&rat(1, 1)));
        assert_eq!(eta.get(1, 1), Some(&rat(7, 6)));
        assert_eq!(eta.get(0, 2), Some(&rat(7, 12)));
        for k in 0..=10 {
            let expected = BigRat::new(Pow::pow(big(2), k + 1), big(k + 1));
            assert_eq!(eta.get(k, 0), Some(&expected), "k={k}");
        }
        assert!(eta.get(0, 14).is_none());
    }

    #[test]
    fn mean_var_examples() {
        let leaves = dist_series(Statistic::Leaves, 2);
        let (mean, var) = exact_mean_var(&leaves, 2).unwrap();
        assert_eq!(mean, rat(3, 5));
        // E[K^2] = (4 + 4)/10, var = 4/5 - 9/25
        assert_eq!(var, rat(11, 25));
        let loops = dist_series(Statistic::Loops, 2);
        assert_eq!(exact_mean_var(&loops, 2).unwrap().0, rat(1, 1));
        let edges = dist_series(Statistic::RootEdges, 1);
        assert_eq!(
            exact_mean_var(&edges, 1).unwrap(),
            (rat(1, 1), BigRat::zero())
        );
        assert_eq!(
            exact_mean_var(&edges, 5),
            Err(GfError::RowAbsent { n: 5, max_n: 1 })
        );
    }

    #[test]
    fn finite_eta_examples() {
        let loops = dist_series(Statistic::Loops, 4);
        assert_eq!(finite_eta_ratio(&loops, 0, 0, 4).unwrap(), rat(706, 420));
        assert_eq!(finite_eta_ratio(&loops, 0, 1, 2).unwrap(), rat(5, 6));
        assert_eq!(finite_eta_ratio(&loops, 1, 0, 2).unwrap(), rat(9, 4));
        assert_eq!(finite_eta_ratio(&loops, 0, 0, 0), Err(GfError::ZeroSize));
        assert_eq!(
            finite_eta_ratio(&loops, 0, 0, 9),
            Err(GfError::RowAbsent { n: 9, max_n: 4 })
        );
        let degree = dist_series(Statistic::RootDegree, 2);
        assert_eq!(
            finite_eta_ratio(&degree, 0, 0, 1),
            Err(GfError::NotLoopsTable(Statistic::RootDegree))
        );
    }

    #[test]
    fn loops_reduce_to_root_degree() {
        let loops = dist_series(Statistic::Loops, 20);
        let degree = dist_series(Statistic::RootDegree, 20);
        for n in 0..=20 {
            assert_eq!(
                loops.rows[n].eval_at_one(Var::W).unwrap(),
                degree.rows[n],
                "n={n}"
            );
        }
    }
}
