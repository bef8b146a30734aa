//! Per-prime assembly and cross-validation.
//!
//! For a completely split prime, `alpha_p` and `beta_p` each have several
//! independent computation routes (class numbers, quartic symbols, the spin
//! average), and the 8-rank identities tie the representations, the class
//! numbers, and the Jacobi symbols into one interlocking suite. Any failed
//! identity is a bug, never data: record construction aborts with the
//! offending prime instead of shipping corrupted statistics.

use crate::arith::{is_prime, is_split_complete, jacobi, modpow, quartic_symbol, sqrt_mod};
use crate::error::{Error, Result};
use crate::quadforms::{
    class_number_charsum_spf, narrow_class_number_with, pell_class, ClassData, PellClass, SpfTable,
};
use crate::spin::recover_beta;
use crate::zsqrt2::{
    gh_from_pell, one_two_rep, pell_rep, two_squares, z2_conditions_with, GHPair, GaussRep,
    PellRep, TwoRep,
};

/// The `(alpha_p, beta_p)` sign cell of a completely split prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CellLabel {
    PlusPlus,
    PlusMinus,
    MinusPlus,
    MinusMinus,
}

impl CellLabel {
    pub fn from_signs(alpha: i8, beta: i8) -> CellLabel {
        match (alpha > 0, beta > 0) {
            (true, true) => CellLabel::PlusPlus,
            (true, false) => CellLabel::PlusMinus,
            (false, true) => CellLabel::MinusPlus,
            (false, false) => CellLabel::MinusMinus,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            CellLabel::PlusPlus => "++",
            CellLabel::PlusMinus => "+-",
            CellLabel::MinusPlus => "-+",
            CellLabel::MinusMinus => "--",
        }
    }

    pub fn parse(s: &str) -> Option<CellLabel> {
        match s {
            "++" => Some(CellLabel::PlusPlus),
            "+-" => Some(CellLabel::PlusMinus),
            "-+" => Some(CellLabel::MinusPlus),
            "--" => Some(CellLabel::MinusMinus),
            _ => None,
        }
    }

    /// Predicted `(h⁺(2p) mod 16, E_p)`; the `E` prediction is absent for
    /// the `(+,+)` cell.
    pub fn prediction(&self) -> (u64, Option<PellClass>) {
        match self {
            CellLabel::PlusPlus => (0, None),
            CellLabel::PlusMinus => (8, Some(PellClass::MinusTwo)),
            CellLabel::MinusPlus => (8, Some(PellClass::PlusTwo)),
            CellLabel::MinusMinus => (8, Some(PellClass::MinusOne)),
        }
    }
}

/// One prime's complete dossier. Every record that exists has passed every
/// check listed in `verdicts`.
#[derive(Debug, Clone)]
pub struct PrimeRecord {
    pub p: u64,
    pub split_complete: bool,
    pub gauss: Option<GaussRep>,
    pub two: Option<TwoRep>,
    pub pell: Option<PellRep>,
    pub gh: Option<GHPair>,
    pub h_neg_p: Option<ClassData>,
    pub h_neg_2p: Option<ClassData>,
    pub h_plus_2p: Option<ClassData>,
    pub e: Option<PellClass>,
    pub alpha: Option<i8>,
    pub beta: Option<i8>,
    pub hasse_q: Option<u8>,
    pub cell: Option<CellLabel>,
    pub verdicts: Vec<&'static str>,
}

/// Which optional work a record build performs.
#[derive(Debug, Clone, Copy)]
pub struct RecordOptions {
    /// Class numbers (and the three-way splitting check) for every
    /// `p ≡ 1 mod 8`, not only the completely split ones.
    pub classnum_all_1mod8: bool,
    /// Narrow class number for every odd prime, not only split-complete.
    pub hplus_all: bool,
    pub lw_suite: bool,
    pub kw_suite: bool,
    pub first_factor: bool,
    /// Run the 32-character spin average as a third beta route.
    pub spin_beta: bool,
}

impl Default for RecordOptions {
    fn default() -> Self {
        RecordOptions {
            classnum_all_1mod8: true,
            hplus_all: true,
            lw_suite: true,
            kw_suite: true,
            first_factor: true,
            spin_beta: true,
        }
    }
}

/// Hasse unit index of `Q(√2p, i)`: 1 iff `E_p = -1`.
pub fn hasse_from_class(e: PellClass) -> u8 {
    if e == PellClass::MinusOne {
        1
    } else {
        2
    }
}

pub fn hasse_index(p: u64) -> Result<u8> {
    Ok(hasse_from_class(pell_class(p)?))
}

fn sign_pow(exp: i64) -> i8 {
    if exp.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// `alpha_p` by both routes: `(-1)^{h(-2p)/8}` and the quartic symbol
/// `[u/p]_4`. Disagreement is fatal.
pub fn alpha_two_routes(p: u64) -> Result<i8> {
    require_split_complete(p)?;
    let spf = SpfTable::new(4 * p + 1)?;
    let h2 = class_number_charsum_spf(-8 * p as i64, &spf)?;
    alpha_routes_with(p, h2.h, &pell_rep(p)?)
}

pub fn alpha_routes_with(p: u64, h_neg_2p: u64, pell: &PellRep) -> Result<i8> {
    if !h_neg_2p.is_multiple_of(8) {
        return Err(Error::violation(
            p,
            "alpha_hypothesis",
            format!("8 does not divide h(-2p) = {h_neg_2p}"),
        ));
    }
    let route1 = sign_pow((h_neg_2p / 8) as i64);
    let route2 = quartic_symbol(pell.u, p)?.value;
    if route1 != route2 {
        return Err(Error::violation(
            p,
            "alpha_two_routes",
            format!("class-number route {route1} vs quartic route {route2}"),
        ));
    }
    Ok(route1)
}

/// `beta_p` by all routes: the class-number definition, the closed Jacobi
/// form `(-1)^{(p-1)/16}·(-1)^{v/4}·(v/u)`, and (optionally) the spin
/// character average. Any pairwise disagreement is fatal.
pub fn beta_three_routes(p: u64) -> Result<i8> {
    require_split_complete(p)?;
    let spf = SpfTable::new(4 * p + 1)?;
    let h1 = class_number_charsum_spf(-4 * p as i64, &spf)?;
    let h2 = class_number_charsum_spf(-8 * p as i64, &spf)?;
    beta_routes_with(
        p,
        &two_squares(p)?,
        &one_two_rep(p)?,
        &pell_rep(p)?,
        h1.h,
        h2.h,
        true,
    )
}

pub fn beta_routes_with(
    p: u64,
    gauss: &GaussRep,
    two: &TwoRep,
    pell: &PellRep,
    h_neg_p: u64,
    h_neg_2p: u64,
    with_spin: bool,
) -> Result<i8> {
    let twist = gauss.a - 1 + gauss.b + 2 * two.d;
    if twist % 8 != 0 || !h_neg_p.is_multiple_of(8) || !h_neg_2p.is_multiple_of(8) {
        return Err(Error::violation(
            p,
            "beta_hypothesis",
            "twist or class numbers not divisible by 8",
        ));
    }
    let route1 = sign_pow(twist / 8 + (h_neg_p / 8) as i64 + (h_neg_2p / 8) as i64);

    if !(p - 1).is_multiple_of(16) || pell.v % 4 != 0 {
        return Err(Error::violation(
            p,
            "beta_hypothesis",
            "p or v congruence failed",
        ));
    }
    let route2 = sign_pow(((p - 1) / 16) as i64 + pell.v / 4) * jacobi(pell.v, pell.u)? as i8;
    if route1 != route2 {
        return Err(Error::violation(
            p,
            "beta_routes_12",
            format!("class-number route {route1} vs closed-form route {route2}"),
        ));
    }
    if with_spin {
        let route3 = recover_beta(p)?;
        if route3 != route1 {
            return Err(Error::violation(
                p,
                "beta_route_spin",
                format!("spin average {route3} vs class-number route {route1}"),
            ));
        }
    }
    Ok(route1)
}

fn require_split_complete(p: u64) -> Result<()> {
    if !is_split_complete(p)? {
        return Err(Error::Domain(
            "alpha/beta are defined only for completely split primes",
        ));
    }
    Ok(())
}

/// The 8-rank identity suite: the four symbol identities, the congruences
/// they imply, both class-number criteria, their composite, and the
/// last-factor Jacobi identity. Returns the list of checks that passed.
pub fn lw_identity_suite(p: u64) -> Result<Vec<&'static str>> {
    if p % 8 != 1 {
        return Err(Error::Domain("identity suite needs p ≡ 1 mod 8"));
    }
    let spf = SpfTable::new(4 * p + 1)?;
    let h1 = class_number_charsum_spf(-4 * p as i64, &spf)?;
    let h2 = class_number_charsum_spf(-8 * p as i64, &spf)?;
    if h1.h % 8 != 0 || h2.h % 8 != 0 {
        return Err(Error::Domain(
            "identity suite hypothesis: 8 | h(-p) and 8 | h(-2p)",
        ));
    }
    let pell = pell_rep(p)?;
    let gauss = two_squares(p)?;
    lw_suite_with(p, &gauss, &pell, &gh_from_pell(&pell), h1.h, h2.h)
}

pub fn lw_suite_with(
    p: u64,
    gauss: &GaussRep,
    pell: &PellRep,
    gh: &GHPair,
    h_neg_p: u64,
    h_neg_2p: u64,
) -> Result<Vec<&'static str>> {
    let mut passed = Vec::new();
    let fail = |name: &'static str, detail: String| Error::violation(p, name, detail);
    let (u, v, g, h) = (pell.u, pell.v, gh.g, gh.h);

    // (u/p) = (-2/u) = (g/p) = (-1/g) = 1
    for (name, val) in [
        ("crit8_u_over_p", jacobi(u, p as i64)?),
        ("crit8_neg2_over_u", jacobi(-2, u)?),
        ("crit8_g_over_p", jacobi(g, p as i64)?),
        ("crit8_neg1_over_g", jacobi(-1, g)?),
    ] {
        if val != 1 {
            return Err(fail("crit8rank1", format!("{name} = {val}")));
        }
        passed.push(name);
    }

    // consequences: u ≡ 1 mod 8, g ≡ 1 mod 4, v ≡ 0 mod 4
    if u.rem_euclid(8) != 1 {
        return Err(fail("u_mod8", format!("u = {u}")));
    }
    if g.rem_euclid(4) != 1 {
        return Err(fail("g_mod4", format!("g = {g}")));
    }
    if v.rem_euclid(4) != 0 {
        return Err(fail("v_mod4", format!("v = {v}")));
    }
    passed.extend(["u_mod8", "g_mod4", "v_mod4"]);

    // middle factor (2u/p) = 1
    if jacobi(2 * u, p as i64)? != 1 {
        return Err(fail("middle_factor", "(2u/p) != 1".into()));
    }
    passed.push("middle_factor");

    let two_h_over_g = jacobi(2 * h, g)?;
    let u4 = quartic_symbol(u, p)?.value as i32;
    let g4 = quartic_symbol(g, p)?.value as i32;

    // (-1)^{h(-2p)/8} = [u/p]_4
    if sign_pow((h_neg_2p / 8) as i64) as i32 != u4 {
        return Err(fail("lw_a", format!("(-1)^(h(-2p)/8) != [u/p]_4 = {u4}")));
    }
    passed.push("lw_a");

    // (-1)^{h(-p)/8} = [g/p]_4·(2h/g)
    if sign_pow((h_neg_p / 8) as i64) as i32 != g4 * two_h_over_g {
        return Err(fail(
            "lw_b",
            format!("(-1)^(h(-p)/8) != [g/p]_4 (2h/g) = {}", g4 * two_h_over_g),
        ));
    }
    passed.push("lw_b");

    // composite: (-1)^{(h(-p)+h(-2p))/8} = [u/p]_4·[g/p]_4·(2h/g)
    if sign_pow(((h_neg_p + h_neg_2p) / 8) as i64) as i32 != u4 * g4 * two_h_over_g {
        return Err(fail(
            "over_z",
            "composite class-number identity failed".into(),
        ));
    }
    passed.push("over_z");

    // last factor: (2h/g) = (-1)^{v/4}·(v/u)
    if two_h_over_g != last_factor_rhs(u, v)? {
        return Err(fail(
            "last_factor",
            format!("(2h/g) = {two_h_over_g} vs (-1)^(v/4)(v/u)"),
        ));
    }
    passed.push("last_factor");

    // (a-1)/8 ≡ (p-1)/16 mod 2
    let a = gauss.a;
    if (a - 1) % 8 != 0 || ((a - 1) / 8 - ((p - 1) / 16) as i64) % 2 != 0 {
        return Err(fail("a_parity", format!("a = {a}")));
    }
    passed.push("a_parity");

    Ok(passed)
}

/// Right side of the last-factor identity, usable on any coprime pair with
/// `u ≡ 1 mod 8`, `v ≡ 0 mod 4`.
pub fn last_factor_rhs(u: i64, v: i64) -> Result<i32> {
    Ok(sign_pow(v / 4) as i32 * jacobi(v, u)?)
}

/// Left side, through `g = u + v`, `h = u + 2v`.
pub fn last_factor_lhs(u: i64, v: i64) -> Result<i32> {
    jacobi(2 * (u + 2 * v), u + v)
}

/// Classify a split-complete prime into its `(alpha, beta)` cell and check
/// the predicted `(h⁺(2p) mod 16, E_p)` against independently computed
/// values.
pub fn kw_classify(p: u64) -> Result<CellLabel> {
    require_split_complete(p)?;
    let spf = SpfTable::new(4 * p + 1)?;
    let h2 = class_number_charsum_spf(-8 * p as i64, &spf)?;
    let h1 = class_number_charsum_spf(-4 * p as i64, &spf)?;
    let pell = pell_rep(p)?;
    let alpha = alpha_routes_with(p, h2.h, &pell)?;
    let beta = beta_routes_with(
        p,
        &two_squares(p)?,
        &one_two_rep(p)?,
        &pell,
        h1.h,
        h2.h,
        false,
    )?;
    let hplus = narrow_class_number_with(p, &spf)?;
    kw_classify_with(p, alpha, beta, hplus.h, pell_class(p)?)
}

pub fn kw_classify_with(
    p: u64,
    alpha: i8,
    beta: i8,
    h_plus: u64,
    e: PellClass,
) -> Result<CellLabel> {
    let cell = CellLabel::from_signs(alpha, beta);
    let (h16, e_pred) = cell.prediction();
    if h_plus % 16 != h16 {
        return Err(Error::violation(
            p,
            "kw_hplus_mod16",
            format!(
                "cell {} predicts h⁺ ≡ {h16} mod 16, got {h_plus}",
                cell.as_str()
            ),
        ));
    }
    if let Some(expect) = e_pred {
        if e != expect {
            return Err(Error::violation(
                p,
                "kw_pell_class",
                format!(
                    "cell {} predicts E = {}, got {}",
                    cell.as_str(),
                    expect.value(),
                    e.value()
                ),
            ));
        }
    }
    Ok(cell)
}

/// Rational shadow of the quartic symbol of `2 - √2`: the exponentiation
/// `(2 - r)^{(p-1)/4} mod p` must be ±1, agree for both roots `±r` of 2,
/// and equal `(-1)^{(b+2d)/8}`.
pub fn first_factor_check(p: u64) -> Result<()> {
    require_split_complete(p)?;
    first_factor_with(p, &two_squares(p)?, &one_two_rep(p)?)
}

pub fn first_factor_with(p: u64, gauss: &GaussRep, two: &TwoRep) -> Result<()> {
    if quartic_symbol(2, p)?.value != 1 {
        return Err(Error::violation(p, "two_fourth_power", "[2/p]_4 != 1"));
    }
    let bd = gauss.b + 2 * two.d;
    if bd % 8 != 0 {
        return Err(Error::violation(
            p,
            "first_factor",
            format!("b + 2d = {bd} not ≡ 0 mod 8"),
        ));
    }
    let predicted = sign_pow(bd / 8);
    let r = sqrt_mod(2, p)?;
    for root in [r, p - r] {
        let base = (2i64 - root as i64).rem_euclid(p as i64) as u64;
        let t = modpow(base, (p - 1) / 4, p);
        let val = if t == 1 {
            1i8
        } else if t == p - 1 {
            -1
        } else {
            return Err(Error::violation(
                p,
                "first_factor_pm1",
                format!("(2 - {root})^((p-1)/4) = {t} is not ±1"),
            ));
        };
        if val != predicted {
            return Err(Error::violation(
                p,
                "first_factor",
                format!("root {root}: got {val}, predicted {predicted}"),
            ));
        }
    }
    Ok(())
}

/// Assemble one prime's record, running every enabled identity suite.
pub fn build_record(p: u64, opts: &RecordOptions, spf: &SpfTable) -> Result<PrimeRecord> {
    if !is_prime(p) {
        return Err(Error::Domain("build_record: not a prime"));
    }
    let mut rec = PrimeRecord {
        p,
        split_complete: false,
        gauss: None,
        two: None,
        pell: None,
        gh: None,
        h_neg_p: None,
        h_neg_2p: None,
        h_plus_2p: None,
        e: None,
        alpha: None,
        beta: None,
        hasse_q: None,
        cell: None,
        verdicts: vec!["primality_backstop"],
    };
    if p == 2 {
        return Ok(rec);
    }

    let e = pell_class(p)?;
    rec.e = Some(e);
    rec.hasse_q = Some(hasse_from_class(e));
    rec.split_complete = is_split_complete(p)?;

    if p % 4 == 1 {
        rec.gauss = Some(two_squares(p)?);
    }
    if p % 8 == 1 || p % 8 == 3 {
        rec.two = Some(one_two_rep(p)?);
    }
    if p % 8 == 1 || p % 8 == 7 {
        let pell = pell_rep(p)?;
        rec.gh = Some(gh_from_pell(&pell));
        rec.pell = Some(pell);
    }

    if p % 8 == 1 {
        // congruence route must match the splitting test, always
        let z2 = z2_conditions_with(
            rec.gauss.as_ref().unwrap(),
            rec.two.as_ref().unwrap(),
            rec.pell.as_ref().unwrap(),
        );
        if z2 != rec.split_complete {
            return Err(Error::violation(
                p,
                "split_z2",
                format!(
                    "z2 congruences say {z2}, splitting test says {}",
                    rec.split_complete
                ),
            ));
        }
        rec.verdicts.push("split_z2");

        if opts.classnum_all_1mod8 || rec.split_complete {
            let h1 = class_number_charsum_spf(-4 * (p as i64), spf)?;
            let h2 = class_number_charsum_spf(-8 * (p as i64), spf)?;
            let both8 = h1.h % 8 == 0 && h2.h % 8 == 0;
            if both8 != rec.split_complete {
                return Err(Error::violation(
                    p,
                    "split_class8",
                    format!(
                        "8|h(-p), 8|h(-2p) gives {both8}, splitting test says {}",
                        rec.split_complete
                    ),
                ));
            }
            rec.verdicts.push("split_class8");
            rec.h_neg_p = Some(h1);
            rec.h_neg_2p = Some(h2);
        }
    }

    if opts.hplus_all || rec.split_complete {
        let hp = narrow_class_number_with(p, spf)?;
        if hp.h % 2 != 0 {
            return Err(Error::violation(
                p,
                "genus_even",
                format!("h⁺(2p) = {} is odd", hp.h),
            ));
        }
        rec.verdicts.push("genus_even");
        // the h⁺ leg of the reflection: 8 | h⁺(2p) exactly on the
        // split-complete primes
        if (hp.h % 8 == 0) != rec.split_complete {
            return Err(Error::violation(
                p,
                "split_hplus8",
                format!(
                    "h⁺(2p) = {} but splitting test says {}",
                    hp.h, rec.split_complete
                ),
            ));
        }
        rec.verdicts.push("split_hplus8");
        rec.h_plus_2p = Some(hp);
    }

    if rec.split_complete {
        let pell = rec.pell.as_ref().unwrap();
        let gauss = rec.gauss.as_ref().unwrap();
        let two = rec.two.as_ref().unwrap();
        let h1 = rec.h_neg_p.as_ref().unwrap().h;
        let h2 = rec.h_neg_2p.as_ref().unwrap().h;

        let alpha = alpha_routes_with(p, h2, pell)?;
        rec.verdicts.push("alpha_two_routes");
        let beta = beta_routes_with(p, gauss, two, pell, h1, h2, opts.spin_beta)?;
        rec.verdicts.push(if opts.spin_beta {
            "beta_three_routes"
        } else {
            "beta_two_routes"
        });
        rec.alpha = Some(alpha);
        rec.beta = Some(beta);
        rec.cell = Some(CellLabel::from_signs(alpha, beta));

        if opts.lw_suite {
            lw_suite_with(p, gauss, pell, rec.gh.as_ref().unwrap(), h1, h2)?;
            rec.verdicts.push("lw_suite");
        }
        if opts.kw_suite {
            kw_classify_with(p, alpha, beta, rec.h_plus_2p.as_ref().unwrap().h, e)?;
            rec.verdicts.push("kw_classify");
        }
        if opts.first_factor {
            first_factor_with(p, gauss, two)?;
            rec.verdicts.push("first_factor");
        }
    }
    Ok(rec)
}
