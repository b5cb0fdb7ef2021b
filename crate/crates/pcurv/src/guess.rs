//! Recovery of annihilating bivariate polynomials P(t, y) for truncated
//! power series by exact linear algebra, minimal y-degree search, and the
//! end-to-end pipeline that certifies a factorial-ratio spec and guesses the
//! minimal polynomials of F(t) and of Q(t)/t.
//!
//! Two kernel backends sit behind the same contract: fraction-free
//! (Bareiss) elimination over the integers for small systems, and a
//! multi-modular solve with CRT plus rational reconstruction for large
//! ones. Every candidate from either backend is re-verified exactly against
//! the full input precision before it is returned, so no probabilistic
//! result ever escapes.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, mod_inv, mod_mul, rat_mod_p};
use crate::congruence::{prime_survey, SurveyReport};
use crate::error::{Error, Result};
use crate::pcurvature::{algebraicity_evidence, EvidenceReport, EvidenceSource};
use crate::seqcore::{is_integral, FactorialRatioSpec, IntegralityVerdict, RationalSequence};
use crate::series::{exp_primitive, series_from_sequence, QSeries};

/// P(t, y) = sum p_ij t^i y^j with integer coefficients, content 1,
/// canonical sign, and tight degree bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BivariatePolynomial {
    /// coeffs[i][j] multiplies t^i y^j; outer length dt + 1, inner dy + 1.
    coeffs: Vec<Vec<BigInt>>,
}

impl BivariatePolynomial {
    /// Canonicalizes: trims all-zero top rows and columns, divides by the
    /// content, and flips the sign so the first nonzero coefficient in
    /// (i, j) lex order is positive. Errors on the zero polynomial.
    pub fn new(mut coeffs: Vec<Vec<BigInt>>) -> Result<Self> {
        let width = coeffs.iter().map(|r| r.len()).max().unwrap_or(0);
        for row in &mut coeffs {
            row.resize(width, BigInt::zero());
        }
        while coeffs
            .last()
            .is_some_and(|r| r.iter().all(|c| c.is_zero()))
        {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::ZeroPolynomial);
        }
        let mut width = coeffs[0].len();
        while width > 0 && coeffs.iter().all(|r| r[width - 1].is_zero()) {
            width -= 1;
        }
        if width == 0 {
            return Err(Error::ZeroPolynomial);
        }
        for row in &mut coeffs {
            row.truncate(width);
        }
        let mut content = BigInt::zero();
        for c in coeffs.iter().flatten() {
            content = content.gcd(c);
        }
        let first_nonzero_negative = coeffs
            .iter()
            .flatten()
            .find(|c| !c.is_zero())
            .is_some_and(|c| c.is_negative());
        if first_nonzero_negative {
            content = -content;
        }
        for c in coeffs.iter_mut().flatten() {
            *c /= &content;
        }
        Ok(BivariatePolynomial { coeffs })
    }

    pub fn dt(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn dy(&self) -> usize {
        self.coeffs[0].len() - 1
    }

    pub fn coeff(&self, i: usize, j: usize) -> &BigInt {
        &self.coeffs[i][j]
    }

    /// Coefficient of y^j as a series in t, at the given precision.
    fn y_coefficient_series(&self, j: usize, precision: usize) -> QSeries {
        let mut v = vec![BigRational::zero(); precision];
        for (i, row) in self.coeffs.iter().enumerate() {
            if i < precision {
                v[i] = BigRational::from(row[j].clone());
            }
        }
        QSeries::new(v)
    }

    /// P(t, F) in the truncated series ring, by Horner evaluation in y.
    pub fn eval_series(&self, f: &QSeries) -> QSeries {
        let n = f.precision();
        let mut acc = self.y_coefficient_series(self.dy(), n);
        for j in (0..self.dy()).rev() {
            acc = acc.mul(f).add(&self.y_coefficient_series(j, n));
        }
        acc
    }

    pub fn to_json(&self) -> PolynomialJson {
        PolynomialJson {
            dt: self.dt(),
            dy: self.dy(),
            rows: self
                .coeffs
                .iter()
                .map(|r| r.iter().map(|c| c.to_string()).collect())
                .collect(),
        }
    }
}

/// Wire form: {dt, dy, rows: [[decimal strings]]}, rows indexed by t-power.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolynomialJson {
    pub dt: usize,
    pub dy: usize,
    pub rows: Vec<Vec<String>>,
}

impl PolynomialJson {
    pub fn to_polynomial(&self) -> Result<BivariatePolynomial> {
        if self.rows.len() != self.dt + 1 || self.rows.iter().any(|r| r.len() != self.dy + 1) {
            return Err(Error::Parse("polynomial rows do not match dt/dy".into()));
        }
        let coeffs = self
            .rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|s| {
                        s.parse::<BigInt>()
                            .map_err(|_| Error::Parse(format!("bad integer '{s}'")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        BivariatePolynomial::new(coeffs)
    }
}

impl fmt::Display for BivariatePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for j in (0..=self.dy()).rev() {
            for i in 0..=self.dt() {
                let c = &self.coeffs[i][j];
                if c.is_zero() {
                    continue;
                }
                if first {
                    if c.is_negative() {
                        write!(f, "-")?;
                    }
                } else if c.is_negative() {
                    write!(f, " - ")?;
                } else {
                    write!(f, " + ")?;
                }
                first = false;
                let mag = c.abs();
                let mut parts = Vec::new();
                if !mag.is_one() || (i == 0 && j == 0) {
                    parts.push(mag.to_string());
                }
                match i {
                    0 => {}
                    1 => parts.push("t".into()),
                    _ => parts.push(format!("t^{i}")),
                }
                match j {
                    0 => {}
                    1 => parts.push("y".into()),
                    _ => parts.push(format!("y^{j}")),
                }
                write!(f, "{}", parts.join("*"))?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Degree caps, guard-term count, and input precision for one guess.
/// Invariant: precision >= (dt+1)(dy+1) + guard and guard >= 8.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GuessConfig {
    pub dt: usize,
    pub dy: usize,
    pub guard: u32,
    pub precision: usize,
}

impl GuessConfig {
    pub const DEFAULT_GUARD: u32 = 8;

    pub fn new(dt: usize, dy: usize, guard: u32, precision: usize) -> Result<Self> {
        if guard < 8 {
            return Err(Error::GuardTooSmall(guard));
        }
        let need = (dt + 1) * (dy + 1) + guard as usize;
        if precision < need {
            return Err(Error::InsufficientPrecision {
                have: precision,
                need,
            });
        }
        Ok(GuessConfig {
            dt,
            dy,
            guard,
            precision,
        })
    }

    fn rows(&self) -> usize {
        (self.dt + 1) * (self.dy + 1) + self.guard as usize
    }

    fn cols(&self) -> usize {
        (self.dt + 1) * (self.dy + 1)
    }
}

// column layout: (i, j) -> j * (dt + 1) + i, grouped by y-power
fn column_index(dt: usize, i: usize, j: usize) -> usize {
    j * (dt + 1) + i
}

/// Systems at most this wide go through exact Bareiss elimination; wider
/// ones use the multi-modular kernel. Both end in exact verification.
const BAREISS_COLUMN_LIMIT: usize = 48;

/// Finds a nonzero P with P(t, F) = 0 mod t^{(dt+1)(dy+1)+guard}, if one
/// exists within the degree caps. The returned polynomial additionally
/// annihilates F to its full precision; candidates that only survive the
/// solving window are rejected.
pub fn algebraic_guess(f: &QSeries, cfg: &GuessConfig) -> Result<Option<BivariatePolynomial>> {
    if f.precision() < cfg.rows() || f.precision() < cfg.precision {
        return Err(Error::InsufficientPrecision {
            have: f.precision(),
            need: cfg.rows().max(cfg.precision),
        });
    }
    let kernel = if cfg.cols() <= BAREISS_COLUMN_LIMIT {
        kernel_exact(f, cfg)
    } else {
        match kernel_modular(f, cfg) {
            Some(k) => k,
            // unlucky-prime exhaustion; the exact path always terminates
            None => kernel_exact(f, cfg),
        }
    };
    for vector in kernel {
        let coeffs = (0..=cfg.dt)
            .map(|i| {
                (0..=cfg.dy)
                    .map(|j| vector[column_index(cfg.dt, i, j)].clone())
                    .collect()
            })
            .collect();
        let poly = match BivariatePolynomial::new(coeffs) {
            Ok(p) => p,
            Err(_) => continue,
        };
        if verify_annihilation(&poly, f)? >= f.precision() {
            return Ok(Some(poly));
        }
    }
    Ok(None)
}

/// t-adic order of P(t, F), computed independently of the solver by Horner
/// evaluation in the series ring. Order >= precision of F means "verified
/// to precision".
pub fn verify_annihilation(poly: &BivariatePolynomial, f: &QSeries) -> Result<usize> {
    // BivariatePolynomial is never zero by construction, but a caller may
    // round-trip one through JSON it built by hand
    if poly.coeffs.iter().flatten().all(|c| c.is_zero()) {
        return Err(Error::ZeroPolynomial);
    }
    Ok(poly.eval_series(f).order())
}

/// Exact integer kernel: clear denominators per row, run fraction-free
/// elimination, then back-substitute each free column.
fn kernel_exact(f: &QSeries, cfg: &GuessConfig) -> Vec<Vec<BigInt>> {
    let rows = cfg.rows();
    let cols = cfg.cols();
    // powers of F to the solving precision
    let f_window = f.truncate(rows);
    let mut powers = Vec::with_capacity(cfg.dy + 1);
    powers.push(QSeries::one(rows));
    for _ in 1..=cfg.dy {
        powers.push(powers.last().unwrap().mul(&f_window));
    }
    let mut matrix = Vec::with_capacity(rows);
    for m in 0..rows {
        let mut row = vec![BigRational::zero(); cols];
        for j in 0..=cfg.dy {
            for i in 0..=cfg.dt.min(m) {
                row[column_index(cfg.dt, i, j)] = powers[j].coeff(m - i).clone();
            }
        }
        let mut lcm = BigInt::one();
        for entry in &row {
            lcm = lcm.lcm(entry.denom());
        }
        let lcm_rat = BigRational::from(lcm);
        matrix.push(
            row.into_iter()
                .map(|entry| (entry * &lcm_rat).to_integer())
                .collect::<Vec<BigInt>>(),
        );
    }
    integer_kernel(matrix)
}

/// Nullspace basis of an integer matrix, primitive integer vectors, one per
/// free column, ordered by free column.
fn integer_kernel(mut m: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
    let mut prev = BigInt::one();
    let mut r = 0usize;
    for c in 0..cols {
        let Some(pivot_row) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pivot_row);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let t = &m[r][c] * &m[i][j] - &m[i][c] * &m[r][j];
                m[i][j] = t / &prev; // exact by the Bareiss identity
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        pivots.push((r, c));
        r += 1;
        if r == rows {
            break;
        }
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivot_cols.contains(c)) {
        let mut x = vec![BigRational::zero(); cols];
        x[free] = BigRational::one();
        for &(pr, pc) in pivots.iter().rev() {
            let mut acc = BigRational::zero();
            for j in pc + 1..cols {
                if !x[j].is_zero() && !m[pr][j].is_zero() {
                    acc += BigRational::from(m[pr][j].clone()) * &x[j];
                }
            }
            x[pc] = -acc / BigRational::from(m[pr][pc].clone());
        }
        basis.push(clear_denominators(&x));
    }
    basis
}

fn clear_denominators(x: &[BigRational]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for v in x {
        lcm = lcm.lcm(v.denom());
    }
    let lcm_rat = BigRational::from(lcm);
    let ints: Vec<BigInt> = x.iter().map(|v| (v * &lcm_rat).to_integer()).collect();
    let mut content = BigInt::zero();
    for v in &ints {
        content = content.gcd(v);
    }
    if content.is_zero() || content.is_one() {
        return ints;
    }
    ints.into_iter().map(|v| v / &content).collect()
}

/// 62-bit primes, descending, deterministic.
fn modular_primes() -> impl Iterator<Item = u64> {
    ((1u64 << 61)..(1 << 62)).rev().filter(|&n| is_prime(n))
}

const MODULAR_PRIME_LIMIT: usize = 96;

/// Multi-modular kernel: row-reduce mod several large primes, agree on the
/// pivot structure, CRT-combine, and rationally reconstruct. Returns None
/// when reconstruction never stabilizes within the prime budget; the caller
/// then falls back to the exact path. A trivial kernel mod any single prime
/// proves the exact kernel trivial, since reduction can only lose rank.
fn kernel_modular(f: &QSeries, cfg: &GuessConfig) -> Option<Vec<Vec<BigInt>>> {
    let rows = cfg.rows();
    let cols = cfg.cols();
    let mut best: Option<ModularAccumulator> = None;
    for (used, q) in modular_primes().take(MODULAR_PRIME_LIMIT).enumerate() {
        let Some(reduced) = reduce_series_mod(f, q, rows) else {
            continue; // q divides some denominator of F
        };
        let matrix = build_matrix_mod(&reduced, cfg, q);
        let (pivot_cols, null_basis) = rref_nullspace_mod(matrix, cols, q);
        if null_basis.is_empty() {
            return Some(Vec::new());
        }
        match &mut best {
            Some(acc) if acc.nullity() < null_basis.len() => {} // unlucky prime, skip
            Some(acc) if acc.nullity() > null_basis.len() || acc.pivot_cols != pivot_cols => {
                // every earlier prime was unlucky; restart from this one
                best = Some(ModularAccumulator::start(pivot_cols, null_basis, q));
            }
            Some(acc) => acc.absorb(&null_basis, q),
            None => best = Some(ModularAccumulator::start(pivot_cols, null_basis, q)),
        }
        if used >= 1 {
            if let Some(acc) = &best {
                if acc.primes >= 2 {
                    if let Some(vectors) = acc.reconstruct() {
                        return Some(vectors);
                    }
                }
            }
        }
    }
    None
}

struct ModularAccumulator {
    pivot_cols: Vec<usize>,
    /// per basis vector, per entry: residue mod `modulus`
    residues: Vec<Vec<BigInt>>,
    modulus: BigInt,
    primes: usize,
}

impl ModularAccumulator {
    fn start(pivot_cols: Vec<usize>, basis: Vec<Vec<u64>>, q: u64) -> Self {
        ModularAccumulator {
            pivot_cols,
            residues: basis
                .into_iter()
                .map(|v| v.into_iter().map(BigInt::from).collect())
                .collect(),
            modulus: BigInt::from(q),
            primes: 1,
        }
    }

    fn nullity(&self) -> usize {
        self.residues.len()
    }

    fn absorb(&mut self, basis: &[Vec<u64>], q: u64) {
        let m_mod_q = u64::try_from(&self.modulus.mod_floor(&BigInt::from(q))).unwrap();
        let m_inv = mod_inv(m_mod_q, q);
        for (vec, new) in self.residues.iter_mut().zip(basis) {
            for (entry, &b) in vec.iter_mut().zip(new) {
                let a_mod_q = u64::try_from(&entry.mod_floor(&BigInt::from(q))).unwrap();
                let t = mod_mul((b + q - a_mod_q) % q, m_inv, q);
                *entry += &self.modulus * BigInt::from(t);
            }
        }
        self.modulus *= BigInt::from(q);
        self.primes += 1;
    }

    fn reconstruct(&self) -> Option<Vec<Vec<BigInt>>> {
        let mut out = Vec::with_capacity(self.residues.len());
        for vec in &self.residues {
            let mut rationals = Vec::with_capacity(vec.len());
            for entry in vec {
                rationals.push(rational_reconstruct(entry, &self.modulus)?);
            }
            out.push(clear_denominators(&rationals));
        }
        Some(out)
    }
}

/// Wang-style rational reconstruction: the unique a/b with
/// |a|, b <= sqrt(m/2) and a = c b mod m, if it exists.
fn rational_reconstruct(c: &BigInt, m: &BigInt) -> Option<BigRational> {
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), c.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    let (num, den) = if t1.is_negative() {
        (-r1, -t1)
    } else {
        (r1, t1)
    };
    if !num.gcd(&den).is_one() && !num.is_zero() {
        return None;
    }
    Some(BigRational::new(num, den))
}

fn reduce_series_mod(f: &QSeries, q: u64, precision: usize) -> Option<Vec<u64>> {
    (0..precision)
        .map(|k| rat_mod_p(f.coeff(k), q, k as u64).ok())
        .collect()
}

fn build_matrix_mod(f: &[u64], cfg: &GuessConfig, q: u64) -> Vec<Vec<u64>> {
    let rows = cfg.rows();
    let cols = cfg.cols();
    let mut powers: Vec<Vec<u64>> = Vec::with_capacity(cfg.dy + 1);
    let mut one = vec![0u64; rows];
    one[0] = 1;
    powers.push(one);
    for _ in 1..=cfg.dy {
        let prev = powers.last().unwrap();
        let mut next = vec![0u64; rows];
        for (a, &ca) in prev.iter().enumerate() {
            if ca == 0 {
                continue;
            }
            for (b, &cb) in f.iter().take(rows - a).enumerate() {
                if cb != 0 {
                    next[a + b] = (next[a + b] + mod_mul(ca, cb, q)) % q;
                }
            }
        }
        powers.push(next);
    }
    (0..rows)
        .map(|m| {
            let mut row = vec![0u64; cols];
            for j in 0..=cfg.dy {
                for i in 0..=cfg.dt.min(m) {
                    row[column_index(cfg.dt, i, j)] = powers[j][m - i];
                }
            }
            row
        })
        .collect()
}

/// Reduced row echelon form over F_q; returns pivot columns and a
/// nullspace basis (one vector per free column, ascending).
fn rref_nullspace_mod(mut m: Vec<Vec<u64>>, cols: usize, q: u64) -> (Vec<usize>, Vec<Vec<u64>>) {
    let rows = m.len();
    let mut pivot_cols = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, pr);
        let inv = mod_inv(m[r][c], q);
        for j in c..cols {
            m[r][j] = mod_mul(m[r][j], inv, q);
        }
        for i in 0..rows {
            if i != r && m[i][c] != 0 {
                let factor = m[i][c];
                for j in c..cols {
                    let sub = mod_mul(factor, m[r][j], q);
                    m[i][j] = (m[i][j] + q - sub) % q;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivot_cols.contains(c)) {
        let mut x = vec![0u64; cols];
        x[free] = 1;
        for (row, &pc) in pivot_cols.iter().enumerate() {
            // rref row: x[pc] + sum_{j past pc} m[row][j] x[j] = 0
            x[pc] = (q - m[row][free] % q) % q;
        }
        basis.push(x);
    }
    (pivot_cols, basis)
}

/// Smallest y-degree admitting a verified annihilating polynomial within
/// the caps, scanning dy = 1, 2, ... and dt = 1..dt_cap per dy; ties break
/// by (dy, dt) lex order by construction.
pub fn minimal_y_degree(
    f: &QSeries,
    dt_cap: usize,
    dy_cap: usize,
    guard: u32,
) -> Result<Option<(usize, BivariatePolynomial)>> {
    for dy in 1..=dy_cap {
        for dt in 1..=dt_cap {
            let cfg = match GuessConfig::new(dt, dy, guard, f.precision()) {
                Ok(cfg) => cfg,
                // precision exhausted for this dt; larger dt only gets worse
                Err(Error::InsufficientPrecision { .. }) => break,
                Err(e) => return Err(e),
            };
            if let Some(poly) = algebraic_guess(f, &cfg)? {
                return Ok(Some((dy, poly)));
            }
        }
    }
    Ok(None)
}

/// End-to-end certification of one factorial-ratio spec, in the order the
/// evidence is needed: shape checks, integrality, congruence survey,
/// p-curvature evidence for f = (F - 1)/t, minimal polynomial of F, the
/// coefficients of Q(t)/t, and its minimal polynomial if the caps allow.
#[derive(Debug, Clone, Serialize)]
pub struct PipelineReport {
    pub spec: String,
    pub balanced: bool,
    pub kappa_is_ell_plus_one: bool,
    pub integral: bool,
    pub survey: SurveyReport,
    pub evidence: EvidenceReport,
    pub f_minimal: Option<GuessedPolynomial>,
    pub q_over_t_coefficients: Vec<String>,
    pub q_minimal: Option<GuessedPolynomial>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GuessedPolynomial {
    pub y_degree: usize,
    pub t_degree: usize,
    pub polynomial: PolynomialJson,
    pub display: String,
}

impl GuessedPolynomial {
    pub fn from_poly(dy: usize, poly: &BivariatePolynomial) -> Self {
        GuessedPolynomial {
            y_degree: dy,
            t_degree: poly.dt(),
            polynomial: poly.to_json(),
            display: poly.to_string(),
        }
    }
}

pub struct PipelineParams {
    pub p_max: u64,
    pub n_max: u64,
    pub precision: usize,
    pub dt_cap: usize,
    pub dy_cap: usize,
    pub guard: u32,
}

pub fn golyshev_pipeline(
    spec: &FactorialRatioSpec,
    params: &PipelineParams,
) -> Result<PipelineReport> {
    if !spec.balanced() {
        return Err(Error::Unbalanced {
            c_sum: spec.c_sum(),
            d_sum: spec.d_sum(),
        });
    }
    match is_integral(spec) {
        IntegralityVerdict::Integral => {}
        IntegralityVerdict::NonIntegralTerm { n, value } => {
            return Err(Error::NonIntegral { n, value })
        }
        IntegralityVerdict::NegativeBreakpoint { x, landau } => {
            return Err(Error::NonIntegral {
                n: 0,
                value: format!("step function is {landau} at x = {x}"),
            })
        }
    }
    let seq = RationalSequence::from_spec(spec.clone());
    let survey = prime_survey(&seq, params.p_max, params.n_max);
    let evidence = algebraicity_evidence(
        &EvidenceSource::Spec(spec.clone()),
        2,
        params.p_max,
        params.precision,
    )?;

    // F = 1 + sum_{n >= 1} a_n t^n; the library's f-series is (F - 1)/t
    let f_series = series_from_sequence(&seq, params.precision);
    let mut big_f = vec![BigRational::one()];
    big_f.extend(f_series.coeffs().iter().take(params.precision - 1).cloned());
    let big_f = QSeries::new(big_f);
    let f_minimal = minimal_y_degree(&big_f, params.dt_cap, params.dy_cap, params.guard)?
        .map(|(dy, poly)| GuessedPolynomial::from_poly(dy, &poly));

    let q_over_t = exp_primitive(&seq, params.precision);
    let q_over_t_coefficients = q_over_t
        .coeffs()
        .iter()
        .take(8)
        .map(|c| c.to_string())
        .collect();
    let q_minimal = minimal_y_degree(&q_over_t, params.dt_cap, params.dy_cap, params.guard)?
        .map(|(dy, poly)| GuessedPolynomial::from_poly(dy, &poly));

    Ok(PipelineReport {
        spec: spec.to_string(),
        balanced: true,
        kappa_is_ell_plus_one: spec.d().len() == spec.c().len() + 1,
        integral: true,
        survey,
        evidence,
        f_minimal,
        q_over_t_coefficients,
        q_minimal,
    })
}
