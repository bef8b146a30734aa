//! Exact class numbers and the Pell invariant.
//!
//! Imaginary class numbers come in two independent routes — reduced-form
//! enumeration and the exact character-sum formula — which must agree
//! everywhere both run. The narrow class number of discriminant `8p` is the
//! number of cycles of reduced primitive indefinite forms, and the Pell
//! invariant `E_p` is read off the continued fraction of `√(2p)`.

use num_bigint::BigInt;

use crate::arith::{is_prime, kronecker};
use crate::error::{Error, Result};

/// A binary quadratic form `Ax² + Bxy + Cy²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BinaryForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl BinaryForm {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        BinaryForm { a, b, c }
    }

    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_primitive(&self) -> bool {
        gcd(
            gcd(self.a.unsigned_abs(), self.b.unsigned_abs()),
            self.c.unsigned_abs(),
        ) == 1
    }

    /// Reduced positive-definite form: `|B| <= A <= C`, with `B >= 0` when
    /// `|B| = A` or `A = C`.
    pub fn is_reduced_definite(&self) -> bool {
        if self.discriminant() >= 0 || self.a <= 0 {
            return false;
        }
        let ab = self.b.abs();
        ab <= self.a && self.a <= self.c && (self.b >= 0 || (ab != self.a && self.a != self.c))
    }

    /// Reduced indefinite form: `0 < B < √D` and `√D - B < 2|A| < √D + B`.
    pub fn is_reduced_indefinite(&self) -> bool {
        let d = self.discriminant();
        if d <= 0 {
            return false;
        }
        let b = self.b;
        if b <= 0 || b * b >= d {
            return false;
        }
        let ta = 2 * self.a.abs();
        // √D < 2|A| + B  and  2|A| - B < √D, exact in integers
        d < (ta + b) * (ta + b) && (ta <= b || (ta - b) * (ta - b) < d)
    }

    /// Reduction step on reduced indefinite forms: the unique reduced
    /// right-neighbor `(C, B', C')` with `B' ≡ -B mod 2|C|` in the window
    /// `(√D - 2|C|, √D)`.
    pub fn rho(&self) -> Result<BinaryForm> {
        let d = self.discriminant();
        let s = (d as u64).isqrt() as i64;
        let c2 = 2 * self.c.abs();
        let r = (-self.b).rem_euclid(c2);
        let b_new = s - (s - r).rem_euclid(c2);
        if b_new <= 0 {
            return Err(Error::Domain("rho: input form not reduced"));
        }
        let num = b_new * b_new - d;
        if num % (4 * self.c) != 0 {
            return Err(Error::Domain("rho: inexact division"));
        }
        Ok(BinaryForm::new(self.c, b_new, num / (4 * self.c)))
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Which route produced a class number.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Enumeration,
    CharacterSum,
}

/// A class number together with its discriminant and provenance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassData {
    pub discriminant: i64,
    pub h: u64,
    pub method: Method,
}

/// Smallest-prime-factor table; built once per scan, then shared read-only.
#[derive(Debug)]
pub struct SpfTable {
    spf: Vec<u32>,
}

/// Upper bound on the factor table (u32 entries, ~1 GiB at the cap).
pub const MAX_SPF_LIMIT: u64 = 1 << 28;

impl SpfTable {
    pub fn new(limit: u64) -> Result<SpfTable> {
        if limit > MAX_SPF_LIMIT {
            return Err(Error::Capacity {
                what: "smallest-prime-factor table",
                requested: limit as u128,
                limit: MAX_SPF_LIMIT as u128,
            });
        }
        let n = limit as usize + 1;
        let mut spf = vec![0u32; n];
        let mut i = 2usize;
        while i < n {
            if spf[i] == 0 {
                let mut j = i;
                while j < n {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
            i += 1;
        }
        Ok(SpfTable { spf })
    }

    pub fn limit(&self) -> u64 {
        self.spf.len() as u64 - 1
    }

    #[inline]
    pub fn spf(&self, n: u64) -> u32 {
        self.spf[n as usize]
    }

    /// `(prime, exponent)` pairs, ascending.
    pub fn factorize(&self, mut n: u64) -> Vec<(u64, u32)> {
        let mut out = Vec::new();
        while n > 1 {
            let p = self.spf[n as usize] as u64;
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        out
    }

    /// All positive divisors, unsorted.
    pub fn divisors(&self, n: u64) -> Vec<u64> {
        let mut out = vec![1u64];
        for (p, e) in self.factorize(n) {
            let len = out.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    out.push(out[i] * pk);
                }
            }
        }
        out
    }
}

fn check_imaginary_disc(d: i64) -> Result<()> {
    if d >= 0 || !(d.rem_euclid(4) == 0 || d.rem_euclid(4) == 1) {
        return Err(Error::InvalidDiscriminant(d));
    }
    Ok(())
}

/// Fundamental discriminant test by trial division.
pub fn is_fundamental(d: i64) -> bool {
    if d == 1 {
        return true;
    }
    if d == 0 {
        return false;
    }
    fn squarefree(mut n: u64) -> bool {
        let mut p = 2u64;
        while p * p <= n {
            if n.is_multiple_of(p) {
                n /= p;
                if n.is_multiple_of(p) {
                    return false;
                }
            }
            p += 1;
        }
        true
    }
    match d.rem_euclid(4) {
        1 => squarefree(d.unsigned_abs()),
        0 => {
            let q = d / 4;
            let r = q.rem_euclid(4);
            (r == 2 || r == 3) && squarefree(q.unsigned_abs())
        }
        _ => false,
    }
}

/// Class number of a negative discriminant by counting reduced primitive
/// forms. Quadratic in `√|D|` per value of `B`; the audit route.
pub fn class_number_enum(d: i64) -> Result<ClassData> {
    check_imaginary_disc(d)?;
    let abs_d = d.unsigned_abs();
    let mut h = 0u64;
    let mut b = if d.rem_euclid(2) == 0 { 0i64 } else { 1i64 };
    while 3 * b * b <= abs_d as i64 {
        let m = ((b * b) as u64 + abs_d) / 4;
        let mut a = b.max(1) as u64;
        while a * a <= m {
            if m.is_multiple_of(a) {
                let c = m / a;
                let form = BinaryForm::new(a as i64, b, c as i64);
                if form.is_primitive() {
                    debug_assert!(form.is_reduced_definite());
                    h += if b == 0 || a as i64 == b || a == c {
                        1
                    } else {
                        2
                    };
                }
            }
            a += 1;
        }
        b += 2;
    }
    Ok(ClassData {
        discriminant: d,
        h,
        method: Method::Enumeration,
    })
}

/// Class number of a fundamental `D < -4` by the exact character-sum
/// formula `h(D) = (Σ_{0<k<|D|/2} (D/k)) / (2 - (D/2))`, integer throughout.
pub fn class_number_charsum(d: i64) -> Result<ClassData> {
    charsum_checked(d, None)
}

/// Same formula, with the character filled in multiplicatively from a
/// smallest-prime-factor table (even discriminants only; the table must
/// cover `|D|/2`). Identical output, much less symbol work.
pub fn class_number_charsum_spf(d: i64, spf: &SpfTable) -> Result<ClassData> {
    charsum_checked(d, Some(spf))
}

fn charsum_checked(d: i64, spf: Option<&SpfTable>) -> Result<ClassData> {
    check_imaginary_disc(d)?;
    if d >= -4 {
        return Err(Error::InvalidDiscriminant(d));
    }
    if !is_fundamental(d) {
        return Err(Error::InvalidDiscriminant(d));
    }
    let abs_d = d.unsigned_abs();
    let sum: i64 = match spf {
        Some(table) if d % 4 == 0 && table.limit() >= abs_d / 2 => {
            // χ(even) = 0 here, so fill odd k only: χ(k) = χ(spf k)·χ(k / spf k)
            let half = abs_d / 2;
            let mut vals = vec![0i8; (half / 2 + 1) as usize];
            let mut sum = 0i64;
            let mut k = 1u64;
            while k < half {
                let v: i8 = if k == 1 {
                    1
                } else {
                    let p = table.spf(k) as u64;
                    if p == k {
                        kronecker(d, k as i64) as i8
                    } else {
                        vals[((p - 1) / 2) as usize] * vals[((k / p - 1) / 2) as usize]
                    }
                };
                vals[((k - 1) / 2) as usize] = v;
                sum += v as i64;
                k += 2;
            }
            sum
        }
        _ => {
            let mut sum = 0i64;
            let step = if d % 4 == 0 { 2 } else { 1 };
            let mut k = 1u64;
            while k < abs_d.div_ceil(2) {
                sum += kronecker(d, k as i64) as i64;
                k += step;
            }
            sum
        }
    };
    let denom = 2 - kronecker(d, 2) as i64;
    if sum <= 0 || sum % denom != 0 {
        return Err(Error::violation(
            0,
            "class_number_charsum",
            format!("character sum {sum} not a positive multiple of {denom} for D={d}"),
        ));
    }
    Ok(ClassData {
        discriminant: d,
        h: (sum / denom) as u64,
        method: Method::CharacterSum,
    })
}

/// The unique `E ∈ {-1, +2, -2}` with `x² - 2p·y² = E` solvable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PellClass {
    MinusOne,
    PlusTwo,
    MinusTwo,
}

impl PellClass {
    pub fn value(self) -> i64 {
        match self {
            PellClass::MinusOne => -1,
            PellClass::PlusTwo => 2,
            PellClass::MinusTwo => -2,
        }
    }

    pub fn from_value(v: i64) -> Option<PellClass> {
        match v {
            -1 => Some(PellClass::MinusOne),
            2 => Some(PellClass::PlusTwo),
            -2 => Some(PellClass::MinusTwo),
            _ => None,
        }
    }
}

/// `E_p` together with an exact witness `(x, y)`, `x² - 2p·y² = E`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PellOutcome {
    pub e: PellClass,
    pub witness: (BigInt, BigInt),
}

/// Continued-fraction state walk for `√(2p)`: calls `visit(i, a_i, value)`
/// with the partial quotient `a_i` and `value = (-1)^{i+1}·Q_{i+1}` for each
/// step `i ≥ 0` of one full period.
fn cf_scan(p: u64, mut visit: impl FnMut(usize, u64, i64) -> Result<()>) -> Result<()> {
    let n = 2 * p;
    let a0 = n.isqrt();
    debug_assert!(a0 * a0 != n);
    let mut pk = 0u64;
    let mut qk = 1u64;
    let mut i = 0usize;
    loop {
        let a = (a0 + pk) / qk;
        let p_next = a * qk - pk;
        let q_next = (n - p_next * p_next) / qk;
        let sign = if i.is_multiple_of(2) { -1i64 } else { 1i64 };
        visit(i, a, sign * q_next as i64)?;
        if q_next == 1 {
            return Ok(());
        }
        pk = p_next;
        qk = q_next;
        i += 1;
        if i > 20_000_000 {
            return Err(Error::violation(
                p,
                "pell_invariant",
                "period bound exceeded",
            ));
        }
    }
}

/// `E_p` alone (no witness): one period of the continued fraction of
/// `√(2p)`, asserting the trichotomy along the way.
pub fn pell_class(p: u64) -> Result<PellClass> {
    if p < 3 || !is_prime(p) {
        return Err(Error::Domain("pell invariant needs an odd prime"));
    }
    let mut found: Option<PellClass> = None;
    cf_scan(p, |_, _, value| {
        if let Some(e) = PellClass::from_value(value) {
            match found {
                None => found = Some(e),
                Some(prev) if prev != e => {
                    return Err(Error::violation(
                        p,
                        "pell_trichotomy",
                        format!("both {} and {} represented", prev.value(), value),
                    ))
                }
                _ => {}
            }
        }
        Ok(())
    })?;
    found.ok_or_else(|| Error::violation(p, "pell_trichotomy", "no value of -1, ±2 in one period"))
}

/// `E_p` with an exact big-integer witness from the matching convergent.
pub fn pell_invariant(p: u64) -> Result<PellOutcome> {
    if p < 3 || !is_prime(p) {
        return Err(Error::Domain("pell invariant needs an odd prime"));
    }
    let n = BigInt::from(2 * p);
    // convergent recurrence x_i = a_i·x_{i-1} + x_{i-2}, seeded (1, 0)
    let mut x_prev = BigInt::from(1);
    let mut y_prev = BigInt::from(0);
    let mut x_cur = BigInt::from(0);
    let mut y_cur = BigInt::from(0);
    let mut started = false;
    let mut found: Option<PellOutcome> = None;
    cf_scan(p, |_, a, value| {
        match (&found, PellClass::from_value(value)) {
            (None, _) => {
                let a = BigInt::from(a);
                if started {
                    let x_new = &a * &x_cur + &x_prev;
                    let y_new = &a * &y_cur + &y_prev;
                    x_prev = std::mem::replace(&mut x_cur, x_new);
                    y_prev = std::mem::replace(&mut y_cur, y_new);
                } else {
                    x_cur = a;
                    y_cur = BigInt::from(1);
                    started = true;
                }
                if let Some(e) = PellClass::from_value(value) {
                    if &x_cur * &x_cur - &n * &y_cur * &y_cur != BigInt::from(value) {
                        return Err(Error::violation(
                            p,
                            "pell_witness",
                            "convergent does not witness its own norm",
                        ));
                    }
                    found = Some(PellOutcome {
                        e,
                        witness: (x_cur.clone(), y_cur.clone()),
                    });
                }
            }
            (Some(prev), Some(e)) if e != prev.e => {
                return Err(Error::violation(
                    p,
                    "pell_trichotomy",
                    format!("both {} and {} represented", prev.e.value(), value),
                ));
            }
            _ => {}
        }
        Ok(())
    })?;
    found.ok_or_else(|| Error::violation(p, "pell_trichotomy", "no value of -1, ±2 in one period"))
}

/// True iff the continued fraction of `√(2p)` has odd period.
pub fn cf_period_odd(p: u64) -> Result<bool> {
    let mut len = 0usize;
    cf_scan(p, |i, _, _| {
        len = i + 1;
        Ok(())
    })?;
    Ok(len % 2 == 1)
}

/// Narrow class number `h⁺(2p)`: cycles of reduced primitive indefinite
/// forms of discriminant `8p`, factoring `(D - B²)/4` through `spf`.
pub fn narrow_class_number_with(p: u64, spf: &SpfTable) -> Result<ClassData> {
    if p < 3 || !is_prime(p) {
        return Err(Error::Domain("narrow class number needs an odd prime"));
    }
    let d = 8 * p as i64;
    if spf.limit() < 2 * p {
        return Err(Error::Capacity {
            what: "factor table for (D - B²)/4",
            requested: 2 * p as u128,
            limit: spf.limit() as u128,
        });
    }
    let s = (d as u64).isqrt() as i64;
    let mut forms: Vec<BinaryForm> = Vec::new();
    let mut b = 2i64;
    while b <= s {
        let m = ((d - b * b) / 4) as u64;
        for a in spf.divisors(m) {
            let ta = 2 * a as i64;
            // window √D - B < 2a < √D + B, exact
            if d < (ta + b) * (ta + b) && (ta <= b || (ta - b) * (ta - b) < d) {
                let c = (m / a) as i64;
                if gcd(a, gcd(b as u64, c as u64)) == 1 {
                    forms.push(BinaryForm::new(a as i64, b, -c));
                    forms.push(BinaryForm::new(-(a as i64), b, c));
                }
            }
        }
        b += 2;
    }
    let index: std::collections::HashMap<(i64, i64), usize> = forms
        .iter()
        .enumerate()
        .map(|(i, f)| ((f.a, f.b), i))
        .collect();
    let mut visited = vec![false; forms.len()];
    let mut cycles = 0u64;
    for start in 0..forms.len() {
        if visited[start] {
            continue;
        }
        cycles += 1;
        let mut at = start;
        loop {
            visited[at] = true;
            let next = forms[at].rho()?;
            let &ni = index.get(&(next.a, next.b)).ok_or_else(|| {
                Error::violation(p, "narrow_class_number", "rho left the reduced set")
            })?;
            if ni == start {
                break;
            }
            if visited[ni] {
                return Err(Error::violation(
                    p,
                    "narrow_class_number",
                    "rho cycle collision",
                ));
            }
            at = ni;
        }
    }
    Ok(ClassData {
        discriminant: d,
        h: cycles,
        method: Method::Enumeration,
    })
}

/// Convenience wrapper building a just-large-enough factor table.
pub fn narrow_class_number(p: u64) -> Result<ClassData> {
    let spf = SpfTable::new(2 * p + 1)?;
    narrow_class_number_with(p, &spf)
}

/// Exact 2-adic valuation and odd part.
pub fn two_part(h: u64) -> (u32, u64) {
    assert!(h >= 1);
    let v = h.trailing_zeros();
    (v, h >> v)
}
