//! Shared exact-arithmetic helpers: primality, big factorials via product
//! trees, Legendre valuations, and Wilson-style factorials with the p-part
//! removed, computed modulo prime powers.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// p-adic valuation, with the valuation of zero as an infinite sentinel
/// ordered above every integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn at_least(self, bound: i64) -> bool {
        match self {
            Valuation::Finite(v) => v >= bound,
            Valuation::Infinite => true,
        }
    }
}

impl std::fmt::Display for Valuation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

impl std::ops::Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

/// Deterministic Miller-Rabin, valid for all u64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = mod_pow(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mod_mul(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn require_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NonPrime(p))
    }
}

/// Primes in [2, p_max], ascending.
pub fn primes_up_to(p_max: u64) -> Vec<u64> {
    (2..=p_max).filter(|&n| is_prime(n)).collect()
}

pub fn mod_mul(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mod_mul(acc, base, m);
        }
        base = mod_mul(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of a modulo m, for gcd(a, m) = 1.
pub fn mod_inv(a: u64, m: u64) -> u64 {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r.abs(), 1, "mod_inv of non-unit");
    let inv = old_s * old_r.signum();
    (inv.rem_euclid(m as i128)) as u64
}

/// Product of the integers in [lo, hi], split recursively so the factors
/// stay balanced in size.
fn product_range(lo: u64, hi: u64) -> BigUint {
    if lo > hi {
        return BigUint::one();
    }
    if hi - lo < 8 {
        let mut acc = BigUint::from(lo);
        for k in lo + 1..=hi {
            acc *= k;
        }
        return acc;
    }
    let mid = lo + (hi - lo) / 2;
    product_range(lo, mid) * product_range(mid + 1, hi)
}

fn factorial_cache() -> &'static Mutex<HashMap<u64, Arc<BigUint>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<BigUint>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// n!, by product-tree multiplication, memoized per process run.
pub fn factorial(n: u64) -> Arc<BigUint> {
    if let Some(hit) = factorial_cache().lock().unwrap().get(&n) {
        return Arc::clone(hit);
    }
    let value = Arc::new(if n < 2 {
        BigUint::one()
    } else {
        product_range(2, n)
    });
    factorial_cache()
        .lock()
        .unwrap()
        .insert(n, Arc::clone(&value));
    value
}

/// Exponent of p in n!, by Legendre's formula.
pub fn legendre_valuation(n: u64, p: u64) -> Result<u64> {
    require_prime(p)?;
    let mut total = 0u64;
    let mut q = p;
    loop {
        total += n / q;
        match q.checked_mul(p) {
            Some(next) if next <= n => q = next,
            _ => break,
        }
    }
    Ok(total)
}

/// Product of the units (integers coprime to p) in [1, m], modulo q = p^r.
/// Periodic with period q; the full-period product is -1 except for
/// q in {8, 16, 32, ...} where it is +1.
struct UnitFactorial {
    p: u64,
    q: u64,
    prefix: Vec<u64>,
    period_product: u64,
}

impl UnitFactorial {
    fn new(p: u64, r: u32) -> Self {
        let q = p.pow(r);
        let mut prefix = Vec::with_capacity(q as usize);
        let mut acc = 1u64;
        prefix.push(1);
        for i in 1..q {
            if i % p != 0 {
                acc = mod_mul(acc, i, q);
            }
            prefix.push(acc);
        }
        let period_product = if p == 2 && r >= 3 { 1 } else { q - 1 };
        UnitFactorial {
            p,
            q,
            prefix,
            period_product,
        }
    }

    fn eval(&self, m: u64) -> u64 {
        let whole = m / self.q;
        let rest = (m % self.q) as usize;
        let base = mod_pow(self.period_product, whole, self.q);
        mod_mul(base, self.prefix[rest], self.q)
    }

    /// m! with all factors of p removed, modulo p^r.
    fn factorial_unit(&self, mut m: u64) -> u64 {
        let mut acc = 1u64;
        while m > 0 {
            acc = mod_mul(acc, self.eval(m), self.q);
            m /= self.p;
        }
        acc
    }
}

/// m!/p^{v_p(m!)} mod p^r. Cached per (p, r) since the prefix table costs
/// O(p^r) to build.
pub fn factorial_without_p(m: u64, p: u64, r: u32) -> Result<u64> {
    require_prime(p)?;
    static TABLES: OnceLock<Mutex<HashMap<(u64, u32), Arc<UnitFactorial>>>> = OnceLock::new();
    let tables = TABLES.get_or_init(|| Mutex::new(HashMap::new()));
    let table = {
        let mut guard = tables.lock().unwrap();
        Arc::clone(
            guard
                .entry((p, r))
                .or_insert_with(|| Arc::new(UnitFactorial::new(p, r))),
        )
    };
    Ok(table.factorial_unit(m))
}

/// v_p of a nonzero big integer.
pub fn int_valuation(x: &BigInt, p: u64) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    let p_big = BigInt::from(p);
    let mut v = 0i64;
    let mut cur = x.abs();
    loop {
        let (quo, rem) = num_integer::Integer::div_rem(&cur, &p_big);
        if rem.is_zero() {
            v += 1;
            cur = quo;
        } else {
            return Valuation::Finite(v);
        }
    }
}

/// v_p of an exact rational.
pub fn rat_valuation(x: &BigRational, p: u64) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    let num = int_valuation(x.numer(), p).finite().unwrap();
    let den = int_valuation(x.denom(), p).finite().unwrap();
    Valuation::Finite(num - den)
}

/// Canonical residue of a rational mod p; errors if the denominator is
/// divisible by p. `index` only labels the error.
pub fn rat_mod_p(x: &BigRational, p: u64, index: u64) -> Result<u64> {
    let p_big = BigInt::from(p);
    let den = num_integer::Integer::mod_floor(x.denom(), &p_big);
    if den.is_zero() {
        return Err(Error::DenominatorDivisibleByP(index));
    }
    let num = num_integer::Integer::mod_floor(x.numer(), &p_big);
    let num_u64 = u64::try_from(&num).unwrap();
    let den_u64 = u64::try_from(&den).unwrap();
    Ok(mod_mul(num_u64, mod_inv(den_u64, p), p))
}
