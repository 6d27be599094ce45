//! Arithmetic in `F_p` and `F_{p^m}`.
//!
//! A [`FieldCtx`] is built once per `(p, m)` and then only read. Elements are
//! handled in *index form*: index `0` is zero and index `i >= 1` is
//! `g^(i-1)` for the context's primitive element `g`. Multiplication is an
//! addition of logarithms; addition goes through a Zech logarithm table.
//! The polynomial-basis representation (coefficients packed base `p` into a
//! "poly code") is only used while the tables are built and for display.

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

/// Default cap on `q = p^m`. Walsh spectra are quadratic in `q`.
pub const DEFAULT_MAX_Q: u64 = 1 << 21;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NonPrime(u32),
    #[error("characteristic 2 is not supported")]
    EvenCharacteristic,
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("{p}^{m} exceeds the field size cap {cap}")]
    DegreeTooLarge { p: u32, m: u32, cap: u64 },
    #[error("argument must be nonzero")]
    ZeroArgument,
}

/// An element of a finite field in index form.
///
/// The value is only meaningful together with the [`FieldCtx`] it came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Elem(u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Discrete logarithm to the context's generator, `None` for zero.
    #[inline]
    pub fn log(self) -> Option<u32> {
        self.0.checked_sub(1)
    }
}

/// Whether a value of `F_p` is zero, a nonzero square or a non-square.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ValueClass {
    Zero,
    Square,
    NonSquare,
}

impl ValueClass {
    pub fn of(v: u32, p: u32) -> ValueClass {
        let v = v % p;
        if v == 0 {
            ValueClass::Zero
        } else if legendre(v, p) == Ok(1) {
            ValueClass::Square
        } else {
            ValueClass::NonSquare
        }
    }
}

/// Legendre symbol `(a/p)` for `1 <= a <= p-1`, computed as `a^((p-1)/2) mod p`.
pub fn legendre(a: u32, p: u32) -> Result<i8, FieldError> {
    let a = a % p;
    if a == 0 {
        return Err(FieldError::ZeroArgument);
    }
    if p == 2 {
        return Ok(1);
    }
    let r = pow_mod(a as u64, ((p - 1) / 2) as u64, p as u64);
    Ok(if r == 1 { 1 } else { -1 })
}

/// `(-1/p)`, the sign of `p* = (-1/p) p`.
pub fn minus_one_symbol(p: u32) -> i8 {
    if p % 4 == 1 {
        1
    } else {
        -1
    }
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    let mut acc = 1 % modulus;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % modulus;
        }
        base = base * base % modulus;
        exp >>= 1;
    }
    acc
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let n = n as u64;
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// A fully tabulated finite field `F_{p^m}`.
#[derive(Debug, Clone)]
pub struct FieldCtx {
    p: u32,
    m: u32,
    q: u32,
    modulus: Vec<u32>,
    generator_code: u32,
    /// exponent -> poly code
    antilog: Vec<u32>,
    /// poly code -> exponent (`u32::MAX` for zero)
    log: Vec<u32>,
    /// k -> index of `1 + g^k`
    zech: Vec<u32>,
    /// element index -> absolute trace
    trace_table: Vec<u32>,
    /// k in [0, 2(q-1)) -> trace of `g^(k mod (q-1))`
    trace_by_log: Vec<u32>,
    /// j in [0, p-1) -> the prime-field value of `g^(j (q-1)/(p-1))`
    prime_of_step: Vec<u32>,
}

impl FieldCtx {
    /// Builds `F_{p^m}` with the default cap on `q`.
    pub fn new(p: u32, m: u32) -> Result<FieldCtx, FieldError> {
        FieldCtx::with_cap(p, m, DEFAULT_MAX_Q)
    }

    /// Builds `F_{p^m}`, rejecting `q > max_q`.
    ///
    /// The modulus is the first monic irreducible of degree `m` when the lower
    /// coefficients are read as a base-`p` integer (constant term least
    /// significant) and scanned upward. The generator is the element of
    /// smallest poly code whose order is `q - 1`.
    pub fn with_cap(p: u32, m: u32, max_q: u64) -> Result<FieldCtx, FieldError> {
        if p == 2 {
            return Err(FieldError::EvenCharacteristic);
        }
        if !is_prime(p) {
            return Err(FieldError::NonPrime(p));
        }
        if m == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let too_large = FieldError::DegreeTooLarge { p, m, cap: max_q };
        let q = (p as u64).checked_pow(m).ok_or(too_large)?;
        if q > max_q || q > u32::MAX as u64 / 2 {
            return Err(too_large);
        }
        let q = q as u32;

        let modulus = (0..q)
            .map(|code| {
                let mut f = digits(code, p, m as usize);
                f.push(1);
                f
            })
            .find(|f| poly::is_irreducible(f, p))
            .expect("an irreducible polynomial of every degree exists");

        let order = (q - 1) as u64;
        let factors = prime_factors(order);
        let one = vec![1u32];
        let generator_code = (1..q)
            .find(|&code| {
                let g = digits(code, p, m as usize);
                factors
                    .iter()
                    .all(|&r| poly::pow_mod(&g, order / r, &modulus, p) != one)
            })
            .expect("the multiplicative group is cyclic");

        let gen_poly = digits(generator_code, p, m as usize);
        let mut antilog = vec![0u32; (q - 1) as usize];
        let mut log = vec![u32::MAX; q as usize];
        let mut cur = one;
        for (j, slot) in antilog.iter_mut().enumerate() {
            let code = undigits(&cur, p);
            debug_assert_eq!(log[code as usize], u32::MAX);
            *slot = code;
            log[code as usize] = j as u32;
            cur = poly::mul_mod(&cur, &gen_poly, &modulus, p);
        }

        let zech = antilog
            .iter()
            .map(|&code| {
                let d = code % p;
                let next = code - d + (d + 1) % p;
                if next == 0 {
                    0
                } else {
                    log[next as usize] + 1
                }
            })
            .collect();

        // Trace of the basis monomials t^j, then extend linearly.
        let basis_trace: Vec<u32> = (0..m)
            .map(|j| {
                let l = log[p.pow(j) as usize] as u64;
                let mut acc = vec![0u32; m as usize];
                let mut frob = l;
                for _ in 0..m {
                    let c = digits(antilog[frob as usize], p, m as usize);
                    for (a, b) in acc.iter_mut().zip(c) {
                        *a = (*a + b) % p;
                    }
                    frob = frob * p as u64 % order;
                }
                assert!(acc[1..].iter().all(|&c| c == 0), "trace left F_p");
                acc[0]
            })
            .collect();
        let mut trace_table = vec![0u32; q as usize];
        for code in 1..q {
            let t = digits(code, p, m as usize)
                .iter()
                .zip(&basis_trace)
                .fold(0u64, |acc, (&c, &t)| (acc + c as u64 * t as u64) % p as u64);
            trace_table[(log[code as usize] + 1) as usize] = t as u32;
        }
        let trace_by_log = trace_table[1..]
            .iter()
            .chain(trace_table[1..].iter())
            .copied()
            .collect();

        let step = (q - 1) / (p - 1);
        let prime_of_step = (0..p - 1)
            .map(|j| antilog[(j * step) as usize])
            .collect();

        Ok(FieldCtx {
            p,
            m,
            q,
            modulus,
            generator_code,
            antilog,
            log,
            zech,
            trace_table,
            trace_by_log,
            prime_of_step,
        })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn m(&self) -> u32 {
        self.m
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    /// Modulus coefficients, constant term first; the last entry is 1.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The primitive element `g` in index form.
    pub fn generator(&self) -> Elem {
        Elem(2)
    }

    pub fn generator_code(&self) -> u32 {
        self.generator_code
    }

    pub fn elem(&self, index: u32) -> Option<Elem> {
        (index < self.q).then_some(Elem(index))
    }

    /// `g^k` for any exponent.
    pub fn gen_pow(&self, k: u64) -> Elem {
        Elem((k % (self.q as u64 - 1)) as u32 + 1)
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.q).map(Elem)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Elem> + '_ {
        (1..self.q).map(Elem)
    }

    pub fn from_poly_code(&self, code: u32) -> Option<Elem> {
        match code {
            0 => Some(Elem::ZERO),
            c if c < self.q => Some(Elem(self.log[c as usize] + 1)),
            _ => None,
        }
    }

    pub fn poly_code(&self, x: Elem) -> u32 {
        match x.log() {
            None => 0,
            Some(l) => self.antilog[l as usize],
        }
    }

    /// Polynomial-basis coordinates of `x`, constant term first.
    pub fn coefficients(&self, x: Elem) -> Vec<u32> {
        digits(self.poly_code(x), self.p, self.m as usize)
    }

    /// Embeds `a mod p` into the field.
    pub fn from_prime(&self, a: u32) -> Elem {
        let a = a % self.p;
        if a == 0 {
            Elem::ZERO
        } else {
            Elem(self.log[a as usize] + 1)
        }
    }

    /// The `F_p` value of `x`, or `None` if `x` lies outside the prime field.
    pub fn to_prime(&self, x: Elem) -> Option<u32> {
        let step = (self.q - 1) / (self.p - 1);
        match x.log() {
            None => Some(0),
            Some(l) if l % step == 0 => Some(self.prime_of_step[(l / step) as usize]),
            Some(_) => None,
        }
    }

    #[inline]
    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        if x.0 == 0 || y.0 == 0 {
            return Elem::ZERO;
        }
        let s = (x.0 - 1) + (y.0 - 1);
        let n = self.q - 1;
        Elem(if s >= n { s - n } else { s } + 1)
    }

    #[inline]
    pub fn add(&self, x: Elem, y: Elem) -> Elem {
        if x.0 == 0 {
            return y;
        }
        if y.0 == 0 {
            return x;
        }
        let n = self.q - 1;
        let (a, b) = (x.0 - 1, y.0 - 1);
        let k = if b >= a { b - a } else { b + n - a };
        match self.zech[k as usize] {
            0 => Elem::ZERO,
            z => self.mul(x, Elem(z)),
        }
    }

    #[inline]
    pub fn neg(&self, x: Elem) -> Elem {
        match x.log() {
            None => Elem::ZERO,
            Some(l) => Elem((l + (self.q - 1) / 2) % (self.q - 1) + 1),
        }
    }

    pub fn sub(&self, x: Elem, y: Elem) -> Elem {
        self.add(x, self.neg(y))
    }

    pub fn inv(&self, x: Elem) -> Option<Elem> {
        x.log().map(|l| Elem((self.q - 1 - l) % (self.q - 1) + 1))
    }

    pub fn div(&self, x: Elem, y: Elem) -> Option<Elem> {
        self.inv(y).map(|yi| self.mul(x, yi))
    }

    /// `x^e`, with the convention `0^e = 0` for every `e` (including `0`).
    pub fn pow(&self, x: Elem, e: u64) -> Elem {
        match x.log() {
            None => Elem::ZERO,
            Some(l) => {
                let n = (self.q - 1) as u64;
                Elem((l as u64 * (e % n) % n) as u32 + 1)
            }
        }
    }

    /// `x^(p^j)`.
    pub fn frobenius(&self, x: Elem, j: u32) -> Elem {
        let n = (self.q - 1) as u64;
        self.pow(x, pow_mod(self.p as u64, j as u64, n))
    }

    /// Absolute trace by table lookup.
    #[inline]
    pub fn tr(&self, x: Elem) -> u32 {
        self.trace_table[x.0 as usize]
    }

    /// Absolute trace computed as `sum_{i<m} x^(p^i)` with field arithmetic.
    pub fn trace(&self, x: Elem) -> u32 {
        let s = self.relative_sum(x, self.m);
        self.to_prime(s).expect("absolute trace lies in F_p")
    }

    /// `Tr_1^ell(x)` for `x` in the subfield `F_{p^ell}` (`ell | m`); `None`
    /// if `x` is not in that subfield.
    pub fn subfield_trace(&self, x: Elem, ell: u32) -> Option<u32> {
        if ell == 0 || self.m % ell != 0 || !self.in_subfield(x, ell) {
            return None;
        }
        self.to_prime(self.relative_sum(x, ell))
    }

    pub fn in_subfield(&self, x: Elem, ell: u32) -> bool {
        self.frobenius(x, ell) == x
    }

    fn relative_sum(&self, x: Elem, terms: u32) -> Elem {
        (0..terms).fold(Elem::ZERO, |acc, i| self.add(acc, self.frobenius(x, i)))
    }

    /// Quadratic character of `F_q^×`.
    pub fn eta(&self, x: Elem) -> Result<i8, FieldError> {
        match x.log() {
            None => Err(FieldError::ZeroArgument),
            Some(l) => Ok(if l % 2 == 0 { 1 } else { -1 }),
        }
    }

    /// Trace of `g^k` for `k` in `[0, 2(q-1))`.
    ///
    /// Doubling the period lets a caller slice `[b, b + q - 1)` for any
    /// `b < q - 1` and read `Tr(g^(b+j))` without reducing indices.
    #[inline]
    pub fn trace_by_log(&self) -> &[u32] {
        &self.trace_by_log
    }

    /// Elements of multiplicative order `q - 1`, as `g^t` for ascending `t`.
    pub fn primitive_elements(&self) -> impl Iterator<Item = Elem> + '_ {
        let n = (self.q - 1) as u64;
        (1..n)
            .filter(move |&t| gcd(t, n) == 1)
            .map(move |t| self.gen_pow(t))
    }
}

fn digits(mut code: u32, p: u32, len: usize) -> Vec<u32> {
    let mut out = vec![0u32; len];
    for d in out.iter_mut() {
        *d = code % p;
        code /= p;
    }
    out
}

fn undigits(coeffs: &[u32], p: u32) -> u32 {
    coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Dense polynomials over `F_p`, constant term first, used during
/// construction only.
mod poly {
    use alloc::vec;
    use alloc::vec::Vec;

    use super::prime_factors;

    fn trim(mut a: Vec<u32>) -> Vec<u32> {
        while a.len() > 1 && *a.last().unwrap() == 0 {
            a.pop();
        }
        if a.is_empty() {
            a.push(0);
        }
        a
    }

    fn inv_mod(a: u32, p: u32) -> u32 {
        super::pow_mod(a as u64, (p - 2) as u64, p as u64) as u32
    }

    pub(super) fn rem(a: &[u32], f: &[u32], p: u32) -> Vec<u32> {
        let mut r: Vec<u32> = a.to_vec();
        let df = f.len() - 1;
        let lead_inv = inv_mod(f[df], p);
        while r.len() > df {
            let top = r.len() - 1;
            let c = r[top] as u64 * lead_inv as u64 % p as u64;
            if c != 0 {
                for (i, &fc) in f.iter().enumerate() {
                    let idx = top - df + i;
                    let sub = c * fc as u64 % p as u64;
                    r[idx] = ((r[idx] as u64 + p as u64 - sub) % p as u64) as u32;
                }
            }
            r.pop();
        }
        trim(r)
    }

    pub(super) fn mul_mod(a: &[u32], b: &[u32], f: &[u32], p: u32) -> Vec<u32> {
        let mut prod = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        let prod: Vec<u32> = prod.into_iter().map(|c| c as u32).collect();
        rem(&prod, f, p)
    }

    pub(super) fn pow_mod(base: &[u32], mut e: u64, f: &[u32], p: u32) -> Vec<u32> {
        let mut acc = vec![1u32];
        let mut b = rem(base, f, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(&acc, &b, f, p);
            }
            b = mul_mod(&b, &b, f, p);
            e >>= 1;
        }
        acc
    }

    fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
        while !(b.len() == 1 && b[0] == 0) {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(out)
    }

    /// Rabin's test: `f | x^(p^m) - x` and `gcd(f, x^(p^(m/l)) - x) = 1`
    /// for every prime `l | m`.
    pub(super) fn is_irreducible(f: &[u32], p: u32) -> bool {
        let m = f.len() - 1;
        if m == 1 {
            return true;
        }
        let x = vec![0u32, 1];
        // powers[i] = x^(p^i) mod f
        let mut powers = Vec::with_capacity(m + 1);
        powers.push(rem(&x, f, p));
        for i in 0..m {
            let next = pow_mod(&powers[i], p as u64, f, p);
            powers.push(next);
        }
        if powers[m] != trim(x.clone()) {
            return false;
        }
        prime_factors(m as u64).into_iter().all(|l| {
            let h = sub(&powers[m / l as usize], &x, p);
            let g = gcd(f, &h, p);
            g.len() == 1 && g[0] != 0
        })
    }
}
