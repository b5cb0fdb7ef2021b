//! Factorial-ratio specifications and exact rational sequences.
//!
//! A spec (c_1..c_l; d_1..d_k) defines a_n = prod (c_i n)! / prod (d_j n)!.
//! This module computes terms exactly, computes their p-adic valuations
//! through Legendre sums, and decides integrality of the whole sequence via
//! the step-function criterion on [0, 1].

use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{self, factorial, legendre_valuation, mod_inv, mod_mul, mod_pow};
use crate::error::{Error, Result};

/// The tuples (c_1..c_l; d_1..d_k) defining a factorial-ratio sequence.
/// `c` may be empty; `d` never is. Balance is a testable predicate, not a
/// construction invariant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct FactorialRatioSpec {
    c: Vec<u64>,
    d: Vec<u64>,
}

impl FactorialRatioSpec {
    pub fn new(c: Vec<u64>, d: Vec<u64>) -> Result<Self> {
        if d.is_empty() {
            return Err(Error::Parse("spec needs at least one denominator entry".into()));
        }
        if c.iter().chain(d.iter()).all(|&e| e == 0) {
            return Err(Error::Parse("spec needs at least one positive entry".into()));
        }
        Ok(FactorialRatioSpec { c, d })
    }

    pub fn c(&self) -> &[u64] {
        &self.c
    }

    pub fn d(&self) -> &[u64] {
        &self.d
    }

    pub fn c_sum(&self) -> u64 {
        self.c.iter().sum()
    }

    pub fn d_sum(&self) -> u64 {
        self.d.iter().sum()
    }

    /// sum(c) = sum(d), the hypothesis under which a_n can be integral and
    /// the generating series algebraic.
    pub fn balanced(&self) -> bool {
        self.c_sum() == self.d_sum()
    }
}

impl fmt::Display for FactorialRatioSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u64]| {
            v.iter()
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "{}/{}", join(&self.c), join(&self.d))
    }
}

impl FromStr for FactorialRatioSpec {
    type Err = Error;

    /// Parses the text syntax "c1,c2,.../d1,d2,...", e.g. "6,1/3,2,2".
    /// The c part may be empty ("/2,2" is valid).
    fn from_str(s: &str) -> Result<Self> {
        let (left, right) = s
            .split_once('/')
            .ok_or_else(|| Error::Parse(format!("spec '{s}' has no '/' separator")))?;
        let parse_side = |side: &str| -> Result<Vec<u64>> {
            if side.is_empty() {
                return Ok(Vec::new());
            }
            side.split(',')
                .map(|tok| {
                    tok.parse::<u64>()
                        .map_err(|_| Error::Parse(format!("bad entry '{tok}' in spec '{s}'")))
                })
                .collect()
        };
        FactorialRatioSpec::new(parse_side(left)?, parse_side(right)?)
    }
}

/// prod (c_i n)! / prod (d_j n)! as a reduced exact rational.
pub fn factorial_ratio_term(spec: &FactorialRatioSpec, n: u64) -> BigRational {
    let mut num = BigInt::one();
    for &c in &spec.c {
        num *= BigInt::from((*factorial(c * n)).clone());
    }
    let mut den = BigInt::one();
    for &d in &spec.d {
        den *= BigInt::from((*factorial(d * n)).clone());
    }
    BigRational::new(num, den)
}

pub use crate::arith::legendre_valuation as legendre;

/// v_p of the n-th term via Legendre sums; never touches the huge factorials.
pub fn term_valuation(spec: &FactorialRatioSpec, n: u64, p: u64) -> Result<i64> {
    let mut v = 0i64;
    for &c in &spec.c {
        v += legendre_valuation(c * n, p)? as i64;
    }
    for &d in &spec.d {
        v -= legendre_valuation(d * n, p)? as i64;
    }
    Ok(v)
}

/// a_n mod p^r, through Legendre valuations plus factorials with the p-part
/// removed. Errors when v_p(a_n) < 0, i.e. a_n is outside Z_(p).
pub fn term_mod_prime_power(spec: &FactorialRatioSpec, n: u64, p: u64, r: u32) -> Result<u64> {
    let v = term_valuation(spec, n, p)?;
    if v < 0 {
        return Err(Error::DenominatorDivisibleByP(n));
    }
    if v >= r as i64 {
        return Ok(0);
    }
    let q = p.pow(r);
    let mut acc = mod_pow(p, v as u64, q);
    for &c in &spec.c {
        acc = mod_mul(acc, arith::factorial_without_p(c * n, p, r)?, q);
    }
    for &d in &spec.d {
        acc = mod_mul(acc, mod_inv(arith::factorial_without_p(d * n, p, r)?, q), q);
    }
    Ok(acc)
}

/// L(x) = sum floor(c_i x) - sum floor(d_j x) on [0, 1].
pub fn landau_function(spec: &FactorialRatioSpec, x: &BigRational) -> Result<i64> {
    if x.is_negative() || *x > BigRational::one() {
        return Err(Error::OutOfRange(format!("landau argument {x} outside [0,1]")));
    }
    let floor_of = |e: u64| -> i64 {
        (x * BigRational::from(BigInt::from(e)))
            .floor()
            .to_integer()
            .to_i64()
            .expect("floor fits i64")
    };
    let pos: i64 = spec.c.iter().map(|&e| floor_of(e)).sum();
    let neg: i64 = spec.d.iter().map(|&e| floor_of(e)).sum();
    Ok(pos - neg)
}

/// Outcome of the integrality decision, with a witness on failure.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub enum IntegralityVerdict {
    Integral,
    /// A concrete non-integral term found by bounded search.
    NonIntegralTerm { n: u64, value: String },
    /// The step function dips negative but no small term witnesses it.
    NegativeBreakpoint { x: String, landau: i64 },
}

impl IntegralityVerdict {
    pub fn is_integral(&self) -> bool {
        matches!(self, IntegralityVerdict::Integral)
    }
}

const BRUTE_FORCE_BOUND: u64 = 200;

/// Decides whether a_n is an integer for all n: L(x) >= 0 at every
/// breakpoint k/e, e in c union d. On failure, searches n <= 200 for a
/// non-integral term to report as witness.
pub fn is_integral(spec: &FactorialRatioSpec) -> IntegralityVerdict {
    let mut violating: Option<(BigRational, i64)> = None;
    'outer: for &e in spec.c.iter().chain(spec.d.iter()) {
        if e == 0 {
            continue;
        }
        for k in 0..=e {
            let x = BigRational::new(BigInt::from(k), BigInt::from(e));
            let l = landau_function(spec, &x).expect("breakpoint in [0,1]");
            if l < 0 {
                violating = Some((x, l));
                break 'outer;
            }
        }
    }
    let Some((x, landau)) = violating else {
        return IntegralityVerdict::Integral;
    };
    for n in 1..=BRUTE_FORCE_BOUND {
        let value = factorial_ratio_term(spec, n);
        if !value.denom().is_one() {
            return IntegralityVerdict::NonIntegralTerm {
                n,
                value: value.to_string(),
            };
        }
    }
    IntegralityVerdict::NegativeBreakpoint {
        x: x.to_string(),
        landau,
    }
}

/// Algebraicity of the generating series F(t) for this family: balanced,
/// kappa = l + 1, and integral.
pub fn is_algebraic_hypergeometric(spec: &FactorialRatioSpec) -> bool {
    spec.balanced() && spec.d.len() == spec.c.len() + 1 && is_integral(spec).is_integral()
}

enum SeqKind {
    FactorialRatio(FactorialRatioSpec),
    /// Coefficient stream of num/den: a_n = [t^n] num(t)/den(t).
    RationalFunction {
        num: Vec<BigRational>,
        den: Vec<BigRational>,
        cache: Mutex<Vec<BigRational>>,
    },
    Table(Vec<BigRational>),
    Closure(Box<dyn Fn(u64) -> BigRational + Send + Sync>),
}

/// A lazy exact-rational sequence n -> a_n. Evaluation is pure and
/// deterministic; the rational-function kind memoizes its expansion behind a
/// lock, invisibly to callers.
pub struct RationalSequence {
    kind: Arc<SeqKind>,
    label: String,
}

impl Clone for RationalSequence {
    fn clone(&self) -> Self {
        RationalSequence {
            kind: Arc::clone(&self.kind),
            label: self.label.clone(),
        }
    }
}

impl fmt::Debug for RationalSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalSequence({})", self.label)
    }
}

impl RationalSequence {
    pub fn from_spec(spec: FactorialRatioSpec) -> Self {
        let label = spec.to_string();
        RationalSequence {
            kind: Arc::new(SeqKind::FactorialRatio(spec)),
            label,
        }
    }

    /// Sequence of power-series coefficients of num/den; den(0) must be
    /// nonzero.
    pub fn from_rational_function(
        label: impl Into<String>,
        num: Vec<BigRational>,
        den: Vec<BigRational>,
    ) -> Result<Self> {
        if den.first().is_none_or(|c| c.is_zero()) {
            return Err(Error::DenominatorVanishesAtZero);
        }
        Ok(RationalSequence {
            kind: Arc::new(SeqKind::RationalFunction {
                num,
                den,
                cache: Mutex::new(Vec::new()),
            }),
            label: label.into(),
        })
    }

    /// Finite explicit table a_0, a_1, ...; evaluation past the end panics,
    /// so callers must bound their index range by `table_len`.
    pub fn from_table(label: impl Into<String>, table: Vec<BigRational>) -> Self {
        RationalSequence {
            kind: Arc::new(SeqKind::Table(table)),
            label: label.into(),
        }
    }

    pub fn from_fn(
        label: impl Into<String>,
        f: impl Fn(u64) -> BigRational + Send + Sync + 'static,
    ) -> Self {
        RationalSequence {
            kind: Arc::new(SeqKind::Closure(Box::new(f))),
            label: label.into(),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn as_factorial_ratio(&self) -> Option<&FactorialRatioSpec> {
        match &*self.kind {
            SeqKind::FactorialRatio(spec) => Some(spec),
            _ => None,
        }
    }

    pub fn table_len(&self) -> Option<usize> {
        match &*self.kind {
            SeqKind::Table(t) => Some(t.len()),
            _ => None,
        }
    }

    pub fn eval(&self, n: u64) -> BigRational {
        match &*self.kind {
            SeqKind::FactorialRatio(spec) => factorial_ratio_term(spec, n),
            SeqKind::RationalFunction { num, den, cache } => {
                let idx = n as usize;
                let mut coeffs = cache.lock().unwrap();
                while coeffs.len() <= idx {
                    let k = coeffs.len();
                    let mut acc = num.get(k).cloned().unwrap_or_else(BigRational::zero);
                    for i in 1..den.len().min(k + 1) {
                        acc -= &den[i] * &coeffs[k - i];
                    }
                    let next = acc / &den[0];
                    coeffs.push(next);
                }
                coeffs[idx].clone()
            }
            SeqKind::Table(t) => t
                .get(n as usize)
                .unwrap_or_else(|| panic!("table sequence '{}' has no index {n}", self.label))
                .clone(),
            SeqKind::Closure(f) => f(n),
        }
    }
}
