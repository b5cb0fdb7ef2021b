//! Truncated power series over exact rationals and over F_p, polynomials and
//! reduced rational functions over F_p, and the characteristic-p operations
//! (Frobenius p-th power, p-th root) that drive the p-curvature computation.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{mod_inv, mod_mul, rat_mod_p, require_prime};
use crate::error::{Error, Result};
use crate::seqcore::RationalSequence;

/// Dense truncated series over Q. The coefficient vector *is* the precision:
/// a value with N coefficients represents the class mod t^N.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QSeries {
    coeffs: Vec<BigRational>,
}

impl QSeries {
    pub fn new(coeffs: Vec<BigRational>) -> Self {
        QSeries { coeffs }
    }

    pub fn zero(precision: usize) -> Self {
        QSeries {
            coeffs: vec![BigRational::zero(); precision],
        }
    }

    pub fn one(precision: usize) -> Self {
        let mut s = QSeries::zero(precision);
        if precision > 0 {
            s.coeffs[0] = BigRational::one();
        }
        s
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, k: usize) -> &BigRational {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// t-adic order of the truncation; `precision()` if all stored
    /// coefficients vanish.
    pub fn order(&self) -> usize {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .unwrap_or(self.coeffs.len())
    }

    pub fn truncate(&self, n: usize) -> QSeries {
        QSeries {
            coeffs: self.coeffs[..n.min(self.coeffs.len())].to_vec(),
        }
    }

    pub fn add(&self, other: &QSeries) -> QSeries {
        let n = self.precision().min(other.precision());
        QSeries {
            coeffs: (0..n).map(|k| &self.coeffs[k] + &other.coeffs[k]).collect(),
        }
    }

    pub fn sub(&self, other: &QSeries) -> QSeries {
        let n = self.precision().min(other.precision());
        QSeries {
            coeffs: (0..n).map(|k| &self.coeffs[k] - &other.coeffs[k]).collect(),
        }
    }

    pub fn mul(&self, other: &QSeries) -> QSeries {
        let n = self.precision().min(other.precision());
        let mut out = vec![BigRational::zero(); n];
        for (i, a) in self.coeffs.iter().take(n).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(n - i).enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        QSeries { coeffs: out }
    }

    pub fn scale(&self, factor: &BigRational) -> QSeries {
        QSeries {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// Formal derivative; loses one coefficient of precision.
    pub fn derivative(&self) -> QSeries {
        QSeries {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from(BigInt::from(k)))
                .collect(),
        }
    }

    /// Multiplicative inverse; requires an invertible constant term.
    pub fn inverse(&self) -> Result<QSeries> {
        if self.coeffs.first().is_none_or(|c| c.is_zero()) {
            return Err(Error::NonUnitConstantTerm);
        }
        let n = self.precision();
        let c0_inv = BigRational::one() / &self.coeffs[0];
        let mut out = vec![BigRational::zero(); n];
        out[0] = c0_inv.clone();
        for k in 1..n {
            let mut acc = BigRational::zero();
            for i in 1..=k {
                acc += &self.coeffs[i] * &out[k - i];
            }
            out[k] = -acc * &c0_inv;
        }
        Ok(QSeries { coeffs: out })
    }

    /// Coefficient-wise canonical residues mod p.
    pub fn reduce_mod_p(&self, p: u64) -> Result<FpSeries> {
        require_prime(p)?;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| rat_mod_p(c, p, k as u64))
            .collect::<Result<Vec<u64>>>()?;
        Ok(FpSeries { p, coeffs })
    }
}

/// f(t) = sum_{n >= 1} a_n t^{n-1}, truncated at precision N.
pub fn series_from_sequence(seq: &RationalSequence, precision: usize) -> QSeries {
    QSeries {
        coeffs: (1..=precision as u64).map(|n| seq.eval(n)).collect(),
    }
}

/// E(t) = exp(sum_{n >= 1} a_n t^n / n), computed by the recurrence
/// k E_k = sum_{j=1..k} a_j E_{k-j}, i.e. E' = f E with E(0) = 1.
pub fn exp_primitive(seq: &RationalSequence, precision: usize) -> QSeries {
    let mut out = Vec::with_capacity(precision);
    if precision == 0 {
        return QSeries { coeffs: out };
    }
    out.push(BigRational::one());
    let terms: Vec<BigRational> = (1..precision as u64).map(|n| seq.eval(n)).collect();
    for k in 1..precision {
        let mut acc = BigRational::zero();
        for j in 1..=k {
            acc += &terms[j - 1] * &out[k - j];
        }
        out.push(acc / BigRational::from(BigInt::from(k)));
    }
    QSeries { coeffs: out }
}

/// Dense truncated series over F_p, residues canonical in [0, p).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpSeries {
    p: u64,
    coeffs: Vec<u64>,
}

impl FpSeries {
    pub fn new(p: u64, coeffs: Vec<u64>) -> Result<Self> {
        require_prime(p)?;
        Ok(FpSeries {
            p,
            coeffs: coeffs.into_iter().map(|c| c % p).collect(),
        })
    }

    pub fn zero(p: u64, precision: usize) -> Self {
        FpSeries {
            p,
            coeffs: vec![0; precision],
        }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, k: usize) -> u64 {
        self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn first_nonzero(&self) -> Option<usize> {
        self.coeffs.iter().position(|&c| c != 0)
    }

    pub fn truncate(&self, n: usize) -> FpSeries {
        FpSeries {
            p: self.p,
            coeffs: self.coeffs[..n.min(self.coeffs.len())].to_vec(),
        }
    }

    pub fn add(&self, other: &FpSeries) -> FpSeries {
        assert_eq!(self.p, other.p);
        let n = self.precision().min(other.precision());
        FpSeries {
            p: self.p,
            coeffs: (0..n)
                .map(|k| (self.coeffs[k] + other.coeffs[k]) % self.p)
                .collect(),
        }
    }

    pub fn neg(&self) -> FpSeries {
        FpSeries {
            p: self.p,
            coeffs: self
                .coeffs
                .iter()
                .map(|&c| if c == 0 { 0 } else { self.p - c })
                .collect(),
        }
    }

    pub fn mul(&self, other: &FpSeries) -> FpSeries {
        assert_eq!(self.p, other.p);
        let n = self.precision().min(other.precision());
        let mut out = vec![0u64; n];
        for i in 0..n {
            if self.coeffs[i] == 0 {
                continue;
            }
            for j in 0..n - i {
                if other.coeffs[j] != 0 {
                    out[i + j] =
                        (out[i + j] + mod_mul(self.coeffs[i], other.coeffs[j], self.p)) % self.p;
                }
            }
        }
        FpSeries { p: self.p, coeffs: out }
    }

    pub fn derivative(&self) -> FpSeries {
        FpSeries {
            p: self.p,
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| mod_mul(k as u64 % self.p, c, self.p))
                .collect(),
        }
    }

    /// k-fold formal derivative.
    pub fn iterated_derivative(&self, k: usize) -> FpSeries {
        let mut cur = self.clone();
        for _ in 0..k {
            cur = cur.derivative();
        }
        cur
    }

    /// f^p in characteristic p: coefficients move to the p-grid and stay
    /// fixed (a^p = a in F_p). The result is exact to precision p*N, not
    /// min-rule precision; this is load-bearing for the p-curvature ledger.
    pub fn frobenius_pth_power(&self) -> FpSeries {
        let p = self.p as usize;
        let mut out = vec![0u64; self.coeffs.len() * p];
        for (k, &c) in self.coeffs.iter().enumerate() {
            out[k * p] = c;
        }
        FpSeries { p: self.p, coeffs: out }
    }

    /// Inverse of the Frobenius power: g[k*p] -> result[k]. Errors when a
    /// nonzero coefficient sits off the p-grid.
    pub fn pth_root(&self) -> Result<FpSeries> {
        let p = self.p as usize;
        if let Some(bad) = self
            .coeffs
            .iter()
            .enumerate()
            .position(|(k, &c)| c != 0 && k % p != 0)
        {
            return Err(Error::NonPthPower(bad));
        }
        let out_len = self.coeffs.len().div_ceil(p);
        Ok(FpSeries {
            p: self.p,
            coeffs: (0..out_len).map(|k| self.coeffs[k * p]).collect(),
        })
    }
}

/// Polynomial over F_p, coefficients canonical, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpPoly {
    p: u64,
    coeffs: Vec<u64>,
}

impl FpPoly {
    pub fn new(p: u64, mut coeffs: Vec<u64>) -> Self {
        for c in &mut coeffs {
            *c %= p;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FpPoly { p, coeffs }
    }

    pub fn zero(p: u64) -> Self {
        FpPoly { p, coeffs: vec![] }
    }

    pub fn one(p: u64) -> Self {
        FpPoly { p, coeffs: vec![1] }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree of the zero polynomial is represented as None.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn constant_term(&self) -> u64 {
        self.coeffs.first().copied().unwrap_or(0)
    }

    pub fn add(&self, other: &FpPoly) -> FpPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|k| {
                (self.coeffs.get(k).copied().unwrap_or(0)
                    + other.coeffs.get(k).copied().unwrap_or(0))
                    % self.p
            })
            .collect();
        FpPoly::new(self.p, coeffs)
    }

    pub fn sub(&self, other: &FpPoly) -> FpPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|k| {
                (self.p + self.coeffs.get(k).copied().unwrap_or(0)
                    - other.coeffs.get(k).copied().unwrap_or(0))
                    % self.p
            })
            .collect();
        FpPoly::new(self.p, coeffs)
    }

    pub fn mul(&self, other: &FpPoly) -> FpPoly {
        if self.is_zero() || other.is_zero() {
            return FpPoly::zero(self.p);
        }
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + mod_mul(a, b, self.p)) % self.p;
            }
        }
        FpPoly::new(self.p, out)
    }

    pub fn scale(&self, factor: u64) -> FpPoly {
        FpPoly::new(
            self.p,
            self.coeffs
                .iter()
                .map(|&c| mod_mul(c, factor % self.p, self.p))
                .collect(),
        )
    }

    pub fn div_rem(&self, divisor: &FpPoly) -> (FpPoly, FpPoly) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let mut rem = self.coeffs.clone();
        let dd = divisor.coeffs.len();
        if rem.len() < dd {
            return (FpPoly::zero(self.p), self.clone());
        }
        let lead_inv = mod_inv(divisor.coeffs[dd - 1], self.p);
        let mut quo = vec![0u64; rem.len() - dd + 1];
        for k in (0..quo.len()).rev() {
            let factor = mod_mul(rem[k + dd - 1], lead_inv, self.p);
            if factor == 0 {
                continue;
            }
            quo[k] = factor;
            for (j, &dc) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = (self.p + rem[k + j] - mod_mul(factor, dc, self.p)) % self.p;
            }
        }
        (FpPoly::new(self.p, quo), FpPoly::new(self.p, rem))
    }

    pub fn gcd(&self, other: &FpPoly) -> FpPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> FpPoly {
        match self.coeffs.last() {
            None => self.clone(),
            Some(&lead) => self.scale(mod_inv(lead, self.p)),
        }
    }

    pub fn derivative(&self) -> FpPoly {
        FpPoly::new(
            self.p,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| mod_mul(k as u64 % self.p, c, self.p))
                .collect(),
        )
    }

    /// Substitute t -> t^p. Combined with the identity Frobenius on
    /// coefficients this is the p-th power map on F_p[t].
    pub fn substitute_t_pow_p(&self) -> FpPoly {
        let p = self.p as usize;
        if self.is_zero() {
            return self.clone();
        }
        let mut out = vec![0u64; (self.coeffs.len() - 1) * p + 1];
        for (k, &c) in self.coeffs.iter().enumerate() {
            out[k * p] = c;
        }
        FpPoly::new(self.p, out)
    }
}

impl fmt::Display for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 if c == 1 => write!(f, "t")?,
                1 => write!(f, "{c}t")?,
                _ if c == 1 => write!(f, "t^{k}")?,
                _ => write!(f, "{c}t^{k}")?,
            }
        }
        Ok(())
    }
}

/// Reduced fraction of polynomials over F_p: gcd 1, denominator monic.
/// Equality of reduced forms is coefficient equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpRatFun {
    num: FpPoly,
    den: FpPoly,
}

impl FpRatFun {
    pub fn new(num: FpPoly, den: FpPoly) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        assert_eq!(num.prime(), den.prime());
        if num.is_zero() {
            return FpRatFun {
                den: FpPoly::one(num.prime()),
                num,
            };
        }
        let g = num.gcd(&den);
        let num = num.div_rem(&g).0;
        let den = den.div_rem(&g).0;
        let lead_inv = mod_inv(*den.coeffs().last().unwrap(), den.prime());
        FpRatFun {
            num: num.scale(lead_inv),
            den: den.monic(),
        }
    }

    pub fn prime(&self) -> u64 {
        self.num.prime()
    }

    pub fn numerator(&self) -> &FpPoly {
        &self.num
    }

    pub fn denominator(&self) -> &FpPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &FpRatFun) -> FpRatFun {
        FpRatFun::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    /// Quotient rule, reduced at every step so the denominator stays a power
    /// of the squarefree part times original factors.
    pub fn derivative(&self) -> FpRatFun {
        FpRatFun::new(
            self.num
                .derivative()
                .mul(&self.den)
                .sub(&self.num.mul(&self.den.derivative())),
            self.den.mul(&self.den),
        )
    }

    pub fn iterated_derivative(&self, k: usize) -> FpRatFun {
        let mut cur = self.clone();
        for _ in 0..k {
            cur = cur.derivative();
        }
        cur
    }

    /// The p-th power map: coefficients are fixed by Frobenius, so this is
    /// just t -> t^p in numerator and denominator.
    pub fn frobenius_pth_power(&self) -> FpRatFun {
        FpRatFun::new(self.num.substitute_t_pow_p(), self.den.substitute_t_pow_p())
    }

    /// Power-series expansion to the requested precision, by the linear
    /// recurrence the denominator imposes. Needs den(0) != 0.
    pub fn expand(&self, precision: usize) -> Result<FpSeries> {
        let p = self.prime();
        if self.den.constant_term() == 0 {
            return Err(Error::DenominatorVanishesAtZero);
        }
        let d0_inv = mod_inv(self.den.constant_term(), p);
        let mut out = vec![0u64; precision];
        for k in 0..precision {
            let mut acc = self.num.coeffs().get(k).copied().unwrap_or(0);
            for i in 1..self.den.coeffs().len().min(k + 1) {
                let sub = mod_mul(self.den.coeffs()[i], out[k - i], p);
                acc = (acc + p - sub % p) % p;
            }
            out[k] = mod_mul(acc, d0_inv, p);
        }
        Ok(FpSeries { p, coeffs: out })
    }
}

impl fmt::Display for FpRatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}
