//! Exact arithmetic in `Z[√2]` and the three normalized prime
//! representations `p = a² + b² = c² + 2d² = u² - 2v²`.
//!
//! The fundamental unit is `ε = 1 + √2` (norm -1); totally positive
//! generators of an ideal form a single orbit under `ε²`, and all invariants
//! downstream are built to respect that orbit.

use crate::arith::{is_prime, sqrt_mod};
use crate::error::{Error, Result};

/// An element `u + v√2` with exact integer coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingElt {
    /// coefficient of 1
    pub u: i64,
    /// coefficient of √2
    pub v: i64,
}

pub const ONE: RingElt = RingElt { u: 1, v: 0 };
/// ε = 1 + √2
pub const EPS: RingElt = RingElt { u: 1, v: 1 };
/// ε² = 3 + 2√2
pub const EPS2: RingElt = RingElt { u: 3, v: 2 };

impl RingElt {
    pub const fn new(u: i64, v: i64) -> Self {
        RingElt { u, v }
    }

    /// `u² - 2v²`, exact in 128 bits.
    pub fn norm(&self) -> i128 {
        let u = self.u as i128;
        let v = self.v as i128;
        u * u - 2 * v * v
    }

    /// Conjugate `u - v√2`.
    pub fn conj(&self) -> RingElt {
        RingElt {
            u: self.u,
            v: -self.v,
        }
    }

    pub fn neg(&self) -> RingElt {
        RingElt {
            u: -self.u,
            v: -self.v,
        }
    }

    /// Totally positive: both real embeddings positive, i.e. `u > 0` and
    /// `u² > 2v²`.
    pub fn is_totally_positive(&self) -> bool {
        self.u > 0 && self.norm() > 0
    }

    /// Odd element: odd norm, equivalently odd `u`.
    pub fn is_odd(&self) -> bool {
        self.u & 1 == 1
    }

    pub fn is_zero(&self) -> bool {
        self.u == 0 && self.v == 0
    }
}

impl std::fmt::Display for RingElt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.v >= 0 {
            write!(f, "{}+{}√2", self.u, self.v)
        } else {
            write!(f, "{}{}√2", self.u, self.v)
        }
    }
}

fn fit_i64(x: i128, what: &'static str) -> Result<i64> {
    i64::try_from(x).map_err(|_| Error::Overflow(what))
}

/// Exact product in `Z[√2]`.
pub fn ring_mul(x: RingElt, y: RingElt) -> Result<RingElt> {
    let (xu, xv) = (x.u as i128, x.v as i128);
    let (yu, yv) = (y.u as i128, y.v as i128);
    Ok(RingElt {
        u: fit_i64(xu * yu + 2 * xv * yv, "ring_mul")?,
        v: fit_i64(xu * yv + xv * yu, "ring_mul")?,
    })
}

/// `x · ε^{2k}` exactly; `k` may be negative. Preserves the norm.
pub fn apply_eps2(x: RingElt, k: i32) -> Result<RingElt> {
    let mut out = x;
    for _ in 0..k.unsigned_abs() {
        let u = out.u as i128;
        let v = out.v as i128;
        let (nu, nv) = if k > 0 {
            (3 * u + 4 * v, 2 * u + 3 * v)
        } else {
            (3 * u - 4 * v, 3 * v - 2 * u)
        };
        out = RingElt {
            u: fit_i64(nu, "apply_eps2")?,
            v: fit_i64(nv, "apply_eps2")?,
        };
    }
    Ok(out)
}

/// `p = a² + b²` with `a ≡ 1 mod 4` and `b ≥ 0` even.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GaussRep {
    pub a: i64,
    pub b: i64,
}

/// `p = c² + 2d²` with `c ≡ 1 mod 4` and `d ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwoRep {
    pub c: i64,
    pub d: i64,
}

/// `p = u² - 2v²` with `u, v > 0`, `u ≡ 1 mod 4`, minimal `u` along the
/// ε²-orbit of the reduced ideal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PellRep {
    pub u: i64,
    pub v: i64,
}

impl PellRep {
    pub fn elt(&self) -> RingElt {
        RingElt {
            u: self.u,
            v: self.v,
        }
    }
}

/// `h + g√2 = (u + v√2)·ε`, so `g = u + v`, `h = u + 2v` and `2g² - h² = p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GHPair {
    pub g: i64,
    pub h: i64,
}

/// Cornacchia: deterministic solution of `x² + d·y² = p` for `d ∈ {1, 2}`.
///
/// Runs the Euclid remainder sequence on `(p, z)` where `z` is the smaller
/// square root of `-d` mod `p`, stopping at the first remainder below `√p`.
fn cornacchia(d: u64, p: u64) -> Result<(u64, u64)> {
    let z = sqrt_mod(-(d as i64), p)?;
    let mut r0 = p;
    let mut r1 = z;
    let lim = p.isqrt();
    while r1 > lim {
        let r2 = r0 % r1;
        r0 = r1;
        r1 = r2;
    }
    let rem = p - r1 * r1;
    if !rem.is_multiple_of(d) {
        return Err(Error::NoRepresentation {
            p,
            what: "cornacchia residue not divisible",
        });
    }
    let y2 = rem / d;
    let y = y2.isqrt();
    if y * y != y2 {
        return Err(Error::NoRepresentation {
            p,
            what: "cornacchia cofactor not a square",
        });
    }
    Ok((r1, y))
}

/// Normalize the sign of an odd coordinate to `≡ 1 mod 4`.
fn sign_one_mod4(x: i64) -> i64 {
    debug_assert!(x & 1 == 1);
    if x.rem_euclid(4) == 1 {
        x
    } else {
        -x
    }
}

/// `p = a² + b²` for `p ≡ 1 mod 4`.
pub fn two_squares(p: u64) -> Result<GaussRep> {
    if p % 4 != 1 || !is_prime(p) {
        return Err(Error::NoRepresentation {
            p,
            what: "a²+b² requires p ≡ 1 mod 4",
        });
    }
    let (x, y) = cornacchia(1, p)?;
    let (odd, even) = if x & 1 == 1 { (x, y) } else { (y, x) };
    Ok(GaussRep {
        a: sign_one_mod4(odd as i64),
        b: even as i64,
    })
}

/// `p = c² + 2d²` for `p ≡ 1, 3 mod 8`.
pub fn one_two_rep(p: u64) -> Result<TwoRep> {
    if !(p % 8 == 1 || p % 8 == 3) || !is_prime(p) {
        return Err(Error::NoRepresentation {
            p,
            what: "c²+2d² requires -2 to be a square mod p",
        });
    }
    let (c, d) = cornacchia(2, p)?;
    Ok(TwoRep {
        c: sign_one_mod4(c as i64),
        d: d as i64,
    })
}

/// `p = u² - 2v²` for `p ≡ ±1 mod 8`, normalized.
///
/// Reduces the ideal `(p, r - √2)` with `r = sqrt_mod(2, p)` by the Euclid
/// remainder sequence on `(p, r)`: at the first remainder below `√(2p)` the
/// pair (remainder, cofactor) satisfies `u² - 2v² = p` exactly. One ε²-step
/// then fixes `u ≡ 1 mod 4`; along the positive cone of the orbit `u` is
/// strictly increasing, so the result is the minimal such representative.
pub fn pell_rep(p: u64) -> Result<PellRep> {
    if !(p % 8 == 1 || p % 8 == 7) || !is_prime(p) {
        return Err(Error::NoRepresentation {
            p,
            what: "u²-2v² requires 2 to be a square mod p",
        });
    }
    let r = sqrt_mod(2, p)?;
    let lim = (2 * p).isqrt();
    let (mut r0, mut r1) = (p, r);
    let (mut s0, mut s1) = (0u64, 1u64);
    while r1 > lim {
        let q = r0 / r1;
        let r2 = r0 - q * r1;
        let s2 = s0 + q * s1;
        r0 = r1;
        r1 = r2;
        s0 = s1;
        s1 = s2;
    }
    let cand = RingElt {
        u: r1 as i64,
        v: s1 as i64,
    };
    if cand.norm() != p as i128 {
        return Err(Error::violation(
            p,
            "pell_rep",
            format!("lattice reduction produced norm {} for {cand}", cand.norm()),
        ));
    }
    let elt = if cand.u.rem_euclid(4) == 1 {
        cand
    } else {
        apply_eps2(cand, 1)?
    };
    debug_assert_eq!(elt.norm(), p as i128);
    Ok(PellRep { u: elt.u, v: elt.v })
}

/// `g = u + v`, `h = u + 2v`; then `2g² - h² = u² - 2v²`.
pub fn gh_from_pell(r: &PellRep) -> GHPair {
    GHPair {
        g: r.u + r.v,
        h: r.u + 2 * r.v,
    }
}

/// The six congruences `a ≡ 1 (8)`, `b ≡ 0 (8)`, `c ≡ 1 (8)`, `d ≡ 0 (4)`,
/// `u ≡ 1 (8)`, `v ≡ 0 (4)` on the normalized representations, with the
/// residual sign freedom on `a` and `c` exhausted.
pub fn z2_conditions(p: u64) -> Result<bool> {
    if p % 8 != 1 {
        return Err(Error::NoRepresentation {
            p,
            what: "z2 conditions need all three representations (p ≡ 1 mod 8)",
        });
    }
    let g = two_squares(p)?;
    let t = one_two_rep(p)?;
    let u = pell_rep(p)?;
    Ok(z2_conditions_with(&g, &t, &u))
}

pub(crate) fn z2_conditions_with(g: &GaussRep, t: &TwoRep, u: &PellRep) -> bool {
    let one_mod8 = |x: i64| x.rem_euclid(8) == 1 || (-x).rem_euclid(8) == 1;
    one_mod8(g.a)
        && g.b.rem_euclid(8) == 0
        && one_mod8(t.c)
        && t.d.rem_euclid(4) == 0
        && u.u.rem_euclid(8) == 1
        && u.v.rem_euclid(4) == 0
}
