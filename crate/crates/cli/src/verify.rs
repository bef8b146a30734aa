//! Standalone verify suites, each a bundle of the module-level identity
//! checks runnable at an arbitrary bound. Every function returns
//! machine-readable pass lines, or the error carrying the smallest
//! counterexample.

use anyhow::{bail, Context, Result};
use rand::{Rng, SeedableRng};
use rank16_core::arith::{is_split_complete, jacobi, sieve_primes};
use rank16_core::invariants::{
    beta_routes_with, first_factor_with, kw_classify_with, last_factor_lhs, last_factor_rhs,
    lw_suite_with, CellLabel,
};
use rank16_core::quadforms::{
    class_number_charsum, class_number_charsum_spf, class_number_enum, is_fundamental,
    narrow_class_number_with, pell_class, SpfTable,
};
use rank16_core::spin::{
    bracket, bracket_chi, recover_beta, spin_b, spin_b_from_generator, CharacterTable, IdealRep,
    SpinValue,
};
use rank16_core::zsqrt2::{
    apply_eps2, gh_from_pell, one_two_rep, pell_rep, two_squares, z2_conditions, RingElt,
};
use rayon::prelude::*;

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .context("building worker pool")
}

/// Three-way splitting equivalence over all `p ≡ 1 mod 8` up to `x_max`:
/// the power-residue test, the (z1)+(z2) congruences, and the class-number
/// route `8 | h(-p)` and `8 | h(-2p)` must agree with zero exceptions.
pub fn verify_split(x_max: u64, workers: usize) -> Result<Vec<String>> {
    let primes = sieve_primes(x_max)?;
    let spf = SpfTable::new(4 * x_max + 1)?;
    let candidates: Vec<u64> = primes.iter().filter(|&&p| p % 8 == 1).copied().collect();
    let flags: Vec<rank16_core::Result<bool>> = pool(workers)?.install(|| {
        candidates
            .par_iter()
            .map(|&p| {
                let power = is_split_complete(p)?;
                let congruence = z2_conditions(p)?;
                let h1 = class_number_charsum_spf(-4 * p as i64, &spf)?;
                let h2 = class_number_charsum_spf(-8 * p as i64, &spf)?;
                let classnum = h1.h % 8 == 0 && h2.h % 8 == 0;
                if power != congruence || power != classnum {
                    return Err(rank16_core::Error::violation(
                        p,
                        "split_three_way",
                        format!("power {power}, congruence {congruence}, class-number {classnum}"),
                    ));
                }
                Ok(power)
            })
            .collect()
    });
    let mut split_count = 0u64;
    for f in flags {
        if f? {
            split_count += 1;
        }
    }
    let n = candidates.len();
    let mut lines = vec![format!(
        "PASS split.three_way: {n} primes ≡ 1 mod 8 ≤ {x_max}, {split_count} split-complete, zero exceptions"
    )];
    let odd = (primes.len() - 1) as f64;
    lines.push(format!(
        "INFO split.density: {split_count}/{} odd primes = {:.5} (1/16 = {:.5})",
        primes.len() - 1,
        split_count as f64 / odd,
        1.0 / 16.0
    ));
    Ok(lines)
}

/// Dual-oracle class numbers: reduced-form enumeration equals the
/// character-sum formula for every fundamental `D` with `-bound ≤ D < -4`.
pub fn verify_classnum(bound: u64, workers: usize) -> Result<Vec<String>> {
    let discs: Vec<i64> = (5..=bound as i64)
        .map(|a| -a)
        .filter(|&d| (d.rem_euclid(4) == 0 || d.rem_euclid(4) == 1) && is_fundamental(d))
        .collect();
    let checked: Vec<rank16_core::Result<()>> = pool(workers)?.install(|| {
        discs
            .par_iter()
            .map(|&d| {
                let by_enum = class_number_enum(d)?;
                let by_sum = class_number_charsum(d)?;
                if by_enum.h != by_sum.h {
                    return Err(rank16_core::Error::violation(
                        d.unsigned_abs(),
                        "classnum_dual",
                        format!(
                            "enumeration {} vs character sum {} at D={d}",
                            by_enum.h, by_sum.h
                        ),
                    ));
                }
                Ok(())
            })
            .collect()
    });
    for c in checked {
        c?;
    }
    Ok(vec![format!(
        "PASS classnum.dual_oracle: {} fundamental discriminants with |D| ≤ {bound}, exact equality",
        discs.len()
    )])
}

fn split_complete_upto(x_max: u64) -> Result<Vec<u64>> {
    let primes = sieve_primes(x_max)?;
    let mut out = Vec::new();
    for &p in primes.iter().skip(1) {
        if is_split_complete(p)? {
            out.push(p);
        }
    }
    Ok(out)
}

/// The 8-rank identity suite over every qualifying prime up to `x_max`.
pub fn verify_lw(x_max: u64, workers: usize) -> Result<Vec<String>> {
    let spf = SpfTable::new(4 * x_max + 1)?;
    let qualifying = split_complete_upto(x_max)?;
    let results: Vec<rank16_core::Result<()>> = pool(workers)?.install(|| {
        qualifying
            .par_iter()
            .map(|&p| {
                let h1 = class_number_charsum_spf(-4 * p as i64, &spf)?;
                let h2 = class_number_charsum_spf(-8 * p as i64, &spf)?;
                let pell = pell_rep(p)?;
                lw_suite_with(p, &two_squares(p)?, &pell, &gh_from_pell(&pell), h1.h, h2.h)?;
                first_factor_with(p, &two_squares(p)?, &one_two_rep(p)?)?;
                Ok(())
            })
            .collect()
    });
    for r in results {
        r?;
    }
    Ok(vec![format!(
        "PASS lw.identities: crit8rank1 + LW-A + LW-B + composite + last-factor + first-factor on {} qualifying primes ≤ {x_max}, zero exceptions",
        qualifying.len()
    )])
}

/// Cell predictions (h⁺ mod 16 and E) over every split-complete prime.
pub fn verify_kw(x_max: u64, workers: usize) -> Result<Vec<String>> {
    let spf = SpfTable::new(4 * x_max + 1)?;
    let qualifying = split_complete_upto(x_max)?;
    let cells: Vec<rank16_core::Result<CellLabel>> = pool(workers)?.install(|| {
        qualifying
            .par_iter()
            .map(|&p| {
                let h1 = class_number_charsum_spf(-4 * p as i64, &spf)?;
                let h2 = class_number_charsum_spf(-8 * p as i64, &spf)?;
                let pell = pell_rep(p)?;
                let alpha = rank16_core::invariants::alpha_routes_with(p, h2.h, &pell)?;
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
            })
            .collect()
    });
    let mut tally = [0u64; 4];
    for c in cells {
        match c? {
            CellLabel::PlusPlus => tally[0] += 1,
            CellLabel::PlusMinus => tally[1] += 1,
            CellLabel::MinusPlus => tally[2] += 1,
            CellLabel::MinusMinus => tally[3] += 1,
        }
    }
    Ok(vec![format!(
        "PASS kw.implications: {} split-complete primes ≤ {x_max}, cells ++/+-/-+/-- = {}/{}/{}/{}, zero mismatches",
        tally.iter().sum::<u64>(),
        tally[0],
        tally[1],
        tally[2],
        tally[3]
    )])
}

/// Spin well-definedness: ε⁸-invariance of the bracket, generator
/// independence of `b_n`, the unit-ideal spot value, the ε⁴-invariance of
/// the beta kernel, and the spin average against the symbol route.
pub fn verify_spin(workers: usize) -> Result<Vec<String>> {
    let mut lines = Vec::new();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed_5417);

    // ε⁸-invariance on 10⁴ random odd totally positive elements, for the
    // bare bracket and (on the even-v ones) for all four twists
    let chis8 = CharacterTable::mod8_all();
    let mut done = 0;
    let mut twisted = 0u64;
    while done < 10_000 {
        let u = 2 * rng.gen_range(1i64..1 << 19) + 1;
        let v = rng.gen_range(-(1i64 << 18)..1 << 18);
        let x = RingElt::new(u, v);
        if !x.is_totally_positive() {
            continue;
        }
        let y = apply_eps2(x, 4).map_err(anyhow::Error::from)?;
        if bracket(x)? != bracket(y)? {
            bail!("[α] != [ε⁸α] at α = {x}");
        }
        if v % 2 == 0 {
            for chi in &chis8 {
                if bracket_chi(x, chi)? != bracket_chi(y, chi)? {
                    bail!("[α]_χ != [ε⁸α]_χ at α = {x}, χ = {}", chi.label());
                }
                twisted += 1;
            }
        }
        done += 1;
    }
    lines.push(format!(
        "PASS spin.eps8_invariance: [α] = [ε⁸α] on 10000 random elements, [α]_χ = [ε⁸α]_χ on {twisted} twisted cases"
    ));

    // generator independence on 10³ random ideals, random character pair
    let chis = CharacterTable::mod8_all();
    let psis = CharacterTable::mod16_all();
    let mut done = 0;
    while done < 1000 {
        let u = 2 * rng.gen_range(1i64..1 << 16) + 1;
        let v = rng.gen_range(0i64..1 << 15);
        let x = RingElt::new(u, v);
        if !IdealRep::is_canonical(x) {
            continue;
        }
        let chi = &chis[rng.gen_range(0..4)];
        let psi = &psis[rng.gen_range(0..8)];
        let base = spin_b_from_generator(x, chi, psi)?;
        for k in 1..4 {
            let seeded = spin_b_from_generator(apply_eps2(x, k)?, chi, psi)?;
            if seeded != base {
                bail!("b_n depends on the orbit seed at {x}, k={k}");
            }
        }
        done += 1;
    }
    lines.push("PASS spin.generator_independence: 1000 random ideals, all four orbit seeds".into());

    // unit ideal spot value
    let one = IdealRep::from_generator(RingElt::new(1, 0))?;
    let b1 = spin_b(
        &one,
        &CharacterTable::trivial_mod8(),
        &CharacterTable::trivial_mod16(),
    )?;
    if b1 != (SpinValue { re2: 2, im2: -2 }) {
        bail!("b_(1)(χ₀, ψ₀) = {b1}, expected 1 - i");
    }
    lines.push("PASS spin.unit_ideal: b_(1)(χ₀, ψ₀) = 1 - i exactly".into());

    // ε⁴-invariance of the beta kernel on 10⁴ random admissible pairs
    let mut done = 0;
    while done < 10_000 {
        let u = 8 * rng.gen_range(0i64..1 << 16) + 1;
        let v = 4 * rng.gen_range(1i64..1 << 14);
        let x = RingElt::new(u, v);
        if !x.is_totally_positive() {
            continue;
        }
        let y = apply_eps2(x, 2)?;
        let kernel = |e: RingElt| -> Result<i32> {
            let sign = if (e.v / 4) % 2 == 0 { 1 } else { -1 };
            Ok(sign * jacobi(e.v, e.u)?)
        };
        if kernel(x)? != kernel(y)? {
            bail!("beta kernel not ε⁴-invariant at {x}");
        }
        done += 1;
    }
    lines.push("PASS spin.eps4_kernel: (-1)^(v/4)·(v/u) is ε⁴-invariant on 10000 pairs".into());

    // agreement: spin average equals the symbol-route beta on split-complete
    // primes and vanishes on the other split primes
    let primes = sieve_primes(100_000)?;
    let split: Vec<u64> = primes
        .iter()
        .filter(|&&p| p % 8 == 1 || p % 8 == 7)
        .copied()
        .collect();
    let results: Vec<rank16_core::Result<()>> = pool(workers)?.install(|| {
        split
            .par_iter()
            .map(|&p| {
                let got = recover_beta(p)?;
                let expect = if is_split_complete(p)? {
                    let pell = pell_rep(p)?;
                    let sign = if (((p - 1) / 16) as i64 + pell.v / 4) % 2 == 0 {
                        1i8
                    } else {
                        -1
                    };
                    sign * rank16_core::arith::jacobi(pell.v, pell.u)? as i8
                } else {
                    0
                };
                if got != expect {
                    return Err(rank16_core::Error::violation(
                        p,
                        "spin_agreement",
                        format!("spin average {got}, symbol route {expect}"),
                    ));
                }
                Ok(())
            })
            .collect()
    });
    for r in results {
        r?;
    }
    lines.push(format!(
        "PASS spin.agreement: character average matches beta on {} split primes ≤ 100000 (0 off the split-complete set)",
        split.len()
    ));

    // prime-free last-factor identity, the standalone Jacobi form
    let mut done = 0;
    while done < 10_000 {
        let u = 8 * rng.gen_range(1i64..1 << 20) + 1;
        let v = 4 * rng.gen_range(1i64..1 << 18);
        if gcd(u as u64, v as u64) != 1 {
            continue;
        }
        if last_factor_lhs(u, v)? != last_factor_rhs(u, v)? {
            bail!("last-factor identity failed at u={u}, v={v}");
        }
        done += 1;
    }
    lines.push("PASS spin.last_factor: (2h/g) = (-1)^(v/4)(v/u) on 10000 coprime pairs".into());

    Ok(lines)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
