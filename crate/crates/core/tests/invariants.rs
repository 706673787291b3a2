//! Property and oracle tests for the numeric substrate and the splitting
//! toolkit, beyond the per-operation unit tests.

use circlesplit::num::{pow2, rfloat, BigComplex, Precision};
use circlesplit::{
    aux, contour_sums, elementary_from_power_sums, fact, mod_max, mod_min, nrd, res, roots,
    verify_residual, Limits, Poly,
};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rug::Float;

fn prec(bits: u32) -> Precision {
    Precision::new(bits)
}

fn poly_from_pairs(pairs: &[(f64, f64)], bits: u32) -> Poly {
    Poly::from_f64_coeffs(prec(bits), pairs)
}

fn coeff_strategy(max_len: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..max_len).prop_map(|mut v| {
        // keep the leading coefficient well away from zero
        if let Some(last) = v.last_mut() {
            last.0 += if last.0 >= 0.0 { 0.5 } else { -0.5 };
        }
        v
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn norm_submultiplicative(a in coeff_strategy(10), b in coeff_strategy(10)) {
        let wp = prec(128);
        let pa = poly_from_pairs(&a, 128);
        let pb = poly_from_pairs(&b, 128);
        let prod = pa.mul(&pb, wp);
        let lhs = prod.l1_norm_lower(wp).to_f64();
        let rhs = pa.l1_norm(wp).to_f64() * pb.l1_norm(wp).to_f64();
        prop_assert!(lhs <= rhs * (1.0 + 1e-9));
    }

    #[test]
    fn monic_factor_norm_inequality(a in coeff_strategy(8), b in coeff_strategy(8)) {
        // monic pairs: |F| * |G| <= 2^(deg FG - 1) |FG|
        let wp = prec(128);
        let mut am = a.clone();
        am.push((1.0, 0.0));
        let mut bm = b.clone();
        bm.push((1.0, 0.0));
        let pf = poly_from_pairs(&am, 128);
        let pg = poly_from_pairs(&bm, 128);
        let prod = pf.mul(&pg, wp);
        let deg = prod.degree() as i32;
        let lhs = pf.l1_norm(wp).to_f64() * pg.l1_norm(wp).to_f64();
        let rhs = prod.l1_norm(wp).to_f64() * 2f64.powi(deg - 1);
        prop_assert!(lhs <= rhs * (1.0 + 1e-9));
    }

    #[test]
    fn shift_round_trip(coeffs in coeff_strategy(12), ur in -1.0f64..1.0, ui in -1.0f64..1.0) {
        // documented arithmetic constant: 24 bits of slack at width 192
        let wp = prec(192);
        let p = poly_from_pairs(&coeffs, 192);
        let u = BigComplex::from_f64(wp, ur, ui);
        let back = p.shift(&u, wp).shift(&u.neg(), wp);
        let diff = p.sub(&back, wp).l1_norm(wp);
        let bound = p.l1_norm(wp) * pow2(wp, -192 + 24);
        prop_assert!(diff <= bound, "drift {:e}", diff.to_f64());
    }

    #[test]
    fn dilate_round_trip(coeffs in coeff_strategy(12), log_rho in -3.0f64..3.0) {
        let wp = prec(192);
        let p = poly_from_pairs(&coeffs, 192);
        let rho = rfloat(wp, log_rho.exp());
        let inv = Float::with_val(wp.bits(), rho.recip_ref());
        let back = p.dilate(&rho, wp).unwrap().dilate(&inv, wp).unwrap();
        let diff = p.sub(&back, wp).l1_norm(wp);
        let bound = p.l1_norm(wp) * pow2(wp, -192 + 24);
        prop_assert!(diff <= bound, "drift {:e}", diff.to_f64());
    }
}

#[test]
fn round_rel_contract_on_random_corpus() {
    let mut rng = StdRng::seed_from_u64(0x1234_5678);
    for case in 0..1000 {
        let n = 1 + case % 12;
        let coeffs: Vec<(f64, f64)> = (0..=n)
            .map(|_| {
                let s = 2f64.powi(rng.gen_range(-40..40));
                (
                    s * (rng.gen::<f64>() * 2.0 - 1.0),
                    s * (rng.gen::<f64>() * 2.0 - 1.0),
                )
            })
            .collect();
        let p = poly_from_pairs(&coeffs, 400);
        if p.is_zero() {
            continue;
        }
        let eps = pow2(prec(64), -rng.gen_range(5..=120));
        let rounded = p.round_rel(&eps);
        // verify at doubled precision
        let check = prec(800);
        let diff = p.sub(&rounded, check).l1_norm(check);
        let bound = rounded.l1_norm_lower(check) * &eps;
        assert!(
            diff < bound,
            "case {case}: |P - Q| = {:e} vs eps|Q| = {:e}",
            diff.to_f64(),
            bound.to_f64()
        );
    }
}

/// Statement-level sanity of the max-coefficient bracket: counting roots
/// in the unit disk at the coarsest tolerance `log(2n)` never contradicts
/// the constructed root set.
#[test]
fn unit_disk_count_at_coarse_tolerance() {
    let wp = prec(160);
    let lim = Limits::default();
    let mut rng = StdRng::seed_from_u64(0xabcd_ef01);
    for case in 0..100 {
        let n = 2 + case % 9;
        let roots: Vec<BigComplex> = (0..n)
            .map(|_| {
                let m = 10f64.powf(rng.gen::<f64>() * 2.0 - 1.0);
                let th = rng.gen::<f64>() * std::f64::consts::TAU;
                BigComplex::from_f64(wp, m * th.cos(), m * th.sin())
            })
            .collect();
        let p = Poly::from_roots(wp, &roots);
        let mut mods: Vec<f64> = roots
            .iter()
            .map(|r| r.modulus(wp).to_f64())
            .collect();
        mods.sort_by(f64::total_cmp);
        let tau = (2.0 * n as f64).ln();
        let k = nrd(&p, &rfloat(wp, 1.0), tau, &lim).unwrap();
        // contract at tau = log(2n): rho_k < 2n and rho_{k+1} > 1/(2n)
        if k >= 1 {
            assert!(mods[k - 1] < 2.0 * n as f64 * 1.0001);
        }
        if k < n {
            assert!(mods[k] > 1.0 / (2.0 * n as f64) * 0.9999);
        }
    }
}

#[test]
fn mod_min_stays_below_mod_max() {
    let lim = Limits::default();
    let mut rng = StdRng::seed_from_u64(0x0fed_cba9);
    for case in 0..50 {
        let n = 2 + case % 7;
        let coeffs: Vec<(f64, f64)> = (0..=n)
            .map(|_| (rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0))
            .collect();
        let p = poly_from_pairs(&coeffs, 160);
        if p.degree() < 1 || p.coeff(0).is_zero() {
            continue;
        }
        let tau = 0.05;
        let hi = mod_max(&p, tau, &lim).unwrap().value.to_f64();
        let lo = mod_min(&p, tau, &lim).unwrap().value.to_f64();
        assert!(lo <= hi * (2.0 * tau).exp() * (1.0 + 1e-9));
    }
}

/// Newton's identities reproduce the exact monic factor from exact power
/// sums: no quadrature involved, so the reconstruction is clean to
/// working precision.
#[test]
fn newton_identities_from_exact_power_sums() {
    let wp = prec(256);
    let mut rng = StdRng::seed_from_u64(0x00c0_ffee);
    for case in 0..40 {
        let k = 1 + case % 8;
        let roots: Vec<BigComplex> = (0..k)
            .map(|_| {
                let m = 0.9 * rng.gen::<f64>();
                let th = rng.gen::<f64>() * std::f64::consts::TAU;
                BigComplex::from_f64(wp, m * th.cos(), m * th.sin())
            })
            .collect();
        // oracle: direct power sums of the constructed roots
        let power_sums: Vec<BigComplex> = (1..=k)
            .map(|m| {
                let mut acc = BigComplex::zero(wp);
                for r in &roots {
                    let mut p = r.clone();
                    for _ in 1..m {
                        p = p.mul(r, wp);
                    }
                    acc = acc.add(&p, wp);
                }
                acc
            })
            .collect();
        let phi = elementary_from_power_sums(&power_sums, wp);
        let expected = Poly::from_roots(wp, &roots);
        for (i, c) in phi.iter().enumerate() {
            // phi_i is the coefficient of z^{k-i}
            let want = expected.coeff(k - i);
            let diff = c.sub(&want, wp).modulus(wp);
            let tol = pow2(wp, -200);
            assert!(
                diff < tol,
                "case {case}: phi_{i} off by {:e}",
                diff.to_f64()
            );
        }
    }
}

/// The auxiliary polynomial returned by `aux` satisfies its defining
/// congruence to the requested tolerance.
#[test]
fn aux_result_satisfies_congruence() {
    let wp = prec(192);
    let mut rng = StdRng::seed_from_u64(0xdead_beef);
    for case in 0..30 {
        let inside = 1 + case % 3;
        let outside = 1 + case % 3;
        let mut roots = Vec::new();
        for _ in 0..inside {
            let m = 0.2 + 0.4 * rng.gen::<f64>();
            let th = rng.gen::<f64>() * std::f64::consts::TAU;
            roots.push(BigComplex::from_f64(wp, m * th.cos(), m * th.sin()));
        }
        for _ in 0..outside {
            let m = 2.0 + 1.5 * rng.gen::<f64>();
            let th = rng.gen::<f64>() * std::f64::consts::TAU;
            roots.push(BigComplex::from_f64(wp, m * th.cos(), m * th.sin()));
        }
        let p = Poly::from_roots(wp, &roots);
        let n = roots.len();
        let l = (n + 1).next_power_of_two();
        let Ok((f0, h0)) = res(&p, inside, 4 * l, wp) else {
            continue;
        };
        let Ok((g0, _)) = p.divrem(&f0, wp) else {
            continue;
        };
        let eps = pow2(wp, -80);
        let Some(h1) = aux(&f0, &g0, &h0, &eps, wp).unwrap() else {
            continue;
        };
        let one = Poly::from_f64_coeffs(wp, &[(1.0, 0.0)]);
        let defect = one
            .sub(&h1.mulmod(&g0, &f0, wp).unwrap(), wp)
            .l1_norm(wp);
        assert!(defect < eps, "case {case}: defect {:e}", defect.to_f64());
    }
}

/// The pass-decomposed contour sums agree with the brute-force sums over
/// all N sample points, so the `K`-pass split is consistent with the
/// direct composition.
#[test]
fn contour_sums_match_direct_quadrature() {
    let wp = prec(256);
    let mut rng = StdRng::seed_from_u64(0x7777_1111);
    for case in 0..12 {
        let n = 3 + case % 4;
        let k = 1 + case % 2;
        let mut roots = Vec::new();
        for i in 0..n {
            let m = if i < k {
                0.2 + 0.3 * rng.gen::<f64>()
            } else {
                1.8 + rng.gen::<f64>()
            };
            let th = rng.gen::<f64>() * std::f64::consts::TAU;
            roots.push(BigComplex::from_f64(wp, m * th.cos(), m * th.sin()));
        }
        let p = Poly::from_roots(wp, &roots);
        let l = (n + 1usize).next_power_of_two();
        for passes in [2usize, 4] {
            let samples = passes * l;
            let sums = contour_sums(&p, k, samples, wp).unwrap();

            // oracle: Horner evaluations at every sample point
            let deriv = p.derivative(wp);
            let two_pi = Float::with_val(wp.bits(), rug::float::Constant::Pi) * 2u32;
            let theta = two_pi / samples as u32;
            let mut w_direct = vec![BigComplex::zero(wp); k];
            let mut u_direct = vec![BigComplex::zero(wp); k];
            for j in 0..samples {
                let angle = Float::with_val(wp.bits(), &theta * j as u32);
                let (sin, cos) = angle.sin_cos(Float::new(wp.bits()));
                let z = BigComplex::from_parts(cos, sin);
                let pz = p.eval(&z, wp);
                let dz = deriv.eval(&z, wp);
                let ratio = dz.div(&pz, wp);
                let inv = pz.recip(wp);
                let mut zm = BigComplex::one(wp);
                for m in 1..=k {
                    zm = zm.mul(&z, wp);
                    // w^{(m+1)j} = z^{m+1} at this sample
                    let zm1 = zm.mul(&z, wp);
                    w_direct[m - 1] = w_direct[m - 1].add(&ratio.mul(&zm1, wp), wp);
                    u_direct[m - 1] = u_direct[m - 1].add(&inv.mul(&zm, wp), wp);
                }
            }
            let count = rfloat(wp, samples as f64);
            let tol = pow2(wp, -180);
            for m in 0..k {
                let wd = w_direct[m].div_real(&count, wp);
                let ud = u_direct[m].div_real(&count, wp);
                let dw = sums.power_sums[m].sub(&wd, wp).modulus(wp);
                let du = sums.inv_moments[m].sub(&ud, wp).modulus(wp);
                assert!(dw < tol, "case {case} K={passes}: W_{} off {:e}", m + 1, dw.to_f64());
                assert!(du < tol, "case {case} K={passes}: U_{} off {:e}", m + 1, du.to_f64());
            }
        }
    }
}

/// Structured corpora beyond the random annulus: roots on a circle and
/// tight clusters still meet the residual contract.
#[test]
fn factor_structured_corpora() {
    let wp = prec(192);
    let lim = Limits::default();
    let eps = pow2(prec(96), -50); // ~8.9e-16

    // eight roots equally spaced on |z| = 1.5, slightly perturbed
    let mut rng = StdRng::seed_from_u64(0x9999_0001);
    let circle_roots: Vec<BigComplex> = (0..8)
        .map(|i| {
            let th = i as f64 * std::f64::consts::TAU / 8.0 + 0.01 * rng.gen::<f64>();
            BigComplex::from_f64(wp, 1.5 * th.cos(), 1.5 * th.sin())
        })
        .collect();
    let on_circle = Poly::from_roots(wp, &circle_roots);
    let list = fact(&on_circle, &eps, &lim).unwrap();
    assert!(verify_residual(&on_circle, &list.factors) < eps);

    // a 1e-3 cluster next to well-separated roots
    let cluster_roots = [
        BigComplex::from_f64(wp, 0.7, 0.0),
        BigComplex::from_f64(wp, 0.7005, 0.0),
        BigComplex::from_f64(wp, -1.3, 0.4),
        BigComplex::from_f64(wp, 0.1, -1.9),
    ];
    let clustered = Poly::from_roots(wp, &cluster_roots);
    let list2 = fact(&clustered, &eps, &lim).unwrap();
    assert!(verify_residual(&clustered, &list2.factors) < eps);
}

/// Minimal double-precision Aberth-Ehrlich iteration, used as an
/// independent cross-check oracle: a different algorithm family from the
/// splitting-circle engine.
mod aberth {
    #[derive(Clone, Copy)]
    pub struct C(pub f64, pub f64);

    impl C {
        fn add(self, o: C) -> C {
            C(self.0 + o.0, self.1 + o.1)
        }
        fn sub(self, o: C) -> C {
            C(self.0 - o.0, self.1 - o.1)
        }
        fn mul(self, o: C) -> C {
            C(self.0 * o.0 - self.1 * o.1, self.0 * o.1 + self.1 * o.0)
        }
        fn div(self, o: C) -> C {
            let d = o.0 * o.0 + o.1 * o.1;
            C(
                (self.0 * o.0 + self.1 * o.1) / d,
                (self.1 * o.0 - self.0 * o.1) / d,
            )
        }
        pub fn abs(self) -> f64 {
            self.0.hypot(self.1)
        }
    }

    fn eval(coeffs: &[C], z: C) -> C {
        let mut acc = C(0.0, 0.0);
        for c in coeffs.iter().rev() {
            acc = acc.mul(z).add(*c);
        }
        acc
    }

    pub fn roots(coeffs: &[C]) -> Vec<C> {
        let n = coeffs.len() - 1;
        let deriv: Vec<C> = coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, c)| C(j as f64, 0.0).mul(*c))
            .collect();
        // initial guesses on a slightly irrational circle
        let mut z: Vec<C> = (0..n)
            .map(|i| {
                let th = 2.0 * std::f64::consts::PI * i as f64 / n as f64 + 0.4;
                C(1.3 * th.cos(), 1.3 * th.sin())
            })
            .collect();
        for _ in 0..200 {
            let mut moved = 0.0f64;
            for i in 0..n {
                let p = eval(coeffs, z[i]);
                let dp = eval(&deriv, z[i]);
                if p.abs() == 0.0 {
                    continue;
                }
                let newton = p.div(dp);
                let mut repulse = C(0.0, 0.0);
                for j in 0..n {
                    if i != j {
                        repulse = repulse.add(C(1.0, 0.0).div(z[i].sub(z[j])));
                    }
                }
                let denom = C(1.0, 0.0).sub(newton.mul(repulse));
                let step = newton.div(denom);
                z[i] = z[i].sub(step);
                moved = moved.max(step.abs());
            }
            if moved < 1e-13 {
                break;
            }
        }
        z
    }
}

/// Cross-validation against the Aberth-Ehrlich oracle on random
/// well-separated instances.
#[test]
fn roots_agree_with_aberth_oracle() {
    let wp = prec(192);
    let lim = Limits::default();
    let eps = rfloat(prec(96), 1e-20);
    let mut rng = StdRng::seed_from_u64(0x0abe_0001);
    let mut done = 0;
    while done < 10 {
        let n = 3 + done % 7;
        let coeffs: Vec<(f64, f64)> = (0..n)
            .map(|_| (rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0))
            .chain([(1.0, 0.0)])
            .collect();
        let oracle = aberth::roots(&coeffs.iter().map(|&(r, i)| aberth::C(r, i)).collect::<Vec<_>>());
        // keep instances the double-precision oracle resolves cleanly
        let separated = oracle.iter().enumerate().all(|(i, a)| {
            oracle[..i]
                .iter()
                .all(|b| aberth::C(a.0 - b.0, a.1 - b.1).abs() > 1e-2)
        });
        if !separated {
            continue;
        }
        let p = Poly::from_f64_coeffs(wp, &coeffs);
        let out = roots(&p, &eps, &lim).unwrap();
        for r in &out.roots {
            let (re, im) = (r.re().to_f64(), r.im().to_f64());
            let nearest = oracle
                .iter()
                .map(|o| aberth::C(re - o.0, im - o.1).abs())
                .fold(f64::INFINITY, f64::min);
            assert!(nearest < 1e-8, "root ({re}, {im}) is {nearest:e} from the oracle set");
        }
        done += 1;
    }
}

/// Multiple roots: the residual contract holds and the recovered roots
/// cluster at the right places.
#[test]
fn factor_multiple_roots() {
    let wp = prec(192);
    let lim = Limits::default();
    let eps = rfloat(prec(96), 1e-12);

    // (x - 1)^4: the recentering shortcut strips the root directly
    let one = BigComplex::from_f64(wp, 1.0, 0.0);
    let quad = Poly::from_roots(wp, &[one.clone(), one.clone(), one.clone(), one]);
    let out = roots(&quad, &eps, &lim).unwrap();
    assert!(out.residual < eps);
    for r in &out.roots {
        assert!((r.re().to_f64() - 1.0).abs() < 1e-3);
        assert!(r.im().to_f64().abs() < 1e-3);
    }

    // (x^2 + 1)^2: two double roots of equal modulus
    let i = BigComplex::from_f64(wp, 0.0, 1.0);
    let pairs = Poly::from_roots(wp, &[i.clone(), i.clone().neg(), i.clone(), i.neg()]);
    let out2 = roots(&pairs, &eps, &lim).unwrap();
    assert!(out2.residual < eps);
    for r in &out2.roots {
        assert!(r.re().to_f64().abs() < 1e-3);
        assert!((r.im().to_f64().abs() - 1.0).abs() < 1e-3);
    }
}

/// A rational root ladder: ten equally spaced roots recovered in order.
#[test]
fn factor_rational_ladder() {
    let wp = prec(256);
    let lim = Limits::default();
    let truth: Vec<BigComplex> = (1..=10)
        .map(|j| BigComplex::from_f64(wp, j as f64 / 8.0, 0.0))
        .collect();
    let p = Poly::from_roots(wp, &truth);
    let eps = rfloat(prec(96), 1e-12);
    let out = roots(&p, &eps, &lim).unwrap();
    assert!(out.residual < eps);
    // output is sorted by real part, so it matches the ladder directly
    for (got, want) in out.roots.iter().zip(truth.iter()) {
        let d = got.sub(want, wp).modulus(wp).to_f64();
        assert!(d < 1e-10, "ladder root off by {d:e}");
    }
}

/// Root accuracy for well-separated root sets: each recovered root lands
/// within `100 * eps` of a distinct true root.
#[test]
fn well_separated_root_accuracy() {
    let wp = prec(192);
    let lim = Limits::default();
    let eps_f = 1e-12;
    let eps = rfloat(prec(96), eps_f);
    let mut rng = StdRng::seed_from_u64(0x3141_5926);
    let mut done = 0;
    while done < 12 {
        let n = 3 + done % 6;
        let cands: Vec<(f64, f64)> = (0..n)
            .map(|_| {
                let m = 0.5 + 1.5 * rng.gen::<f64>();
                let th = rng.gen::<f64>() * std::f64::consts::TAU;
                (m * th.cos(), m * th.sin())
            })
            .collect();
        let separated = cands.iter().enumerate().all(|(i, a)| {
            cands[..i]
                .iter()
                .all(|b| ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt() > 0.1)
        });
        if !separated {
            continue;
        }
        let truth: Vec<BigComplex> = cands
            .iter()
            .map(|&(re, im)| BigComplex::from_f64(wp, re, im))
            .collect();
        let p = Poly::from_roots(wp, &truth);
        let out = roots(&p, &eps, &lim).unwrap();
        for r in &out.roots {
            let nearest = truth
                .iter()
                .map(|t| r.sub(t, wp).modulus(wp).to_f64())
                .fold(f64::INFINITY, f64::min);
            assert!(nearest < 100.0 * eps_f, "root error {nearest:e}");
        }
        done += 1;
    }
}
