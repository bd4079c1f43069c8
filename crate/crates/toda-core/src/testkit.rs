//! Seeded-draw helpers shared by the unit tests.

use crate::dressing::DressingData;
use crate::model::ModelParams;
use crate::numkit::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub(crate) fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random complex number with magnitude in `[lo, hi]` and uniform argument.
pub(crate) fn c_annulus(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> Complex64 {
    let mag = rng.gen_range(lo..hi);
    let arg = rng.gen_range(0.0..std::f64::consts::TAU);
    Complex64::from_polar(mag, arg)
}

/// Random complex number with both components uniform in `[−scale, scale]`.
pub(crate) fn c_box(rng: &mut ChaCha8Rng, scale: f64) -> Complex64 {
    Complex64::new(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale))
}

/// Dressing data with full random coefficient tables; pole draws are
/// retried until the n-th power separation holds with a comfortable
/// margin, so the fixed seeds below stay valid.
pub(crate) fn random_dressing(seed: u64, n: usize, r: usize) -> DressingData {
    let mut rng = rng(seed);
    let model = ModelParams::new(n, Complex64::new(1.0, 0.0)).unwrap();
    loop {
        let mu: Vec<Complex64> = (0..r).map(|_| c_annulus(&mut rng, 0.6, 1.8)).collect();
        let nu: Vec<Complex64> = (0..r).map(|_| c_annulus(&mut rng, 0.6, 1.8)).collect();
        if !powers_separated(n, &mu, &nu, 1e-2) {
            continue;
        }
        let c: Vec<Vec<Complex64>> = (0..r)
            .map(|_| (0..n).map(|_| c_box(&mut rng, 1.0)).collect())
            .collect();
        let d: Vec<Vec<Complex64>> = (0..r)
            .map(|_| (0..n).map(|_| c_box(&mut rng, 1.0)).collect())
            .collect();
        if let Ok(data) = DressingData::new(model.clone(), mu, nu, c, d) {
            return data;
        }
    }
}

/// Soliton draw for finite-difference sweeps; see [`field_is_tame`].
/// The filter never inspects equation residuals.
pub(crate) fn tame_solitons(
    seed: u64,
    n: usize,
    r: usize,
    bound: f64,
    d4_bound: f64,
) -> crate::hirota::SolitonParams {
    use crate::hirota::{Soliton, SolitonParams};
    let mut rng = rng(seed);
    let model = ModelParams::new(n, Complex64::new(1.0, 0.0)).unwrap();
    loop {
        let solitons: Vec<Soliton> = (0..r)
            .map(|_| {
                Soliton::new(
                    rng.gen_range(1..n),
                    c_annulus(&mut rng, 0.5, 2.0),
                    Complex64::new(
                        rng.gen_range(-0.8..0.8),
                        rng.gen_range(0.0..std::f64::consts::TAU),
                    ),
                )
            })
            .collect();
        let Ok(params) = SolitonParams::new(model.clone(), solitons) else {
            continue;
        };
        let field = |alpha: i64, pt: crate::model::Point| params.gamma(alpha, pt);
        if field_is_tame(&field, n, bound, d4_bound) {
            return params;
        }
    }
}

/// Well-posedness screen for fields verified by finite differences on
/// `[-1, 1]²`: every component magnitude must stay in `[1/bound, bound]`
/// on a probe lattice with margin (a solution pole at distance d from
/// the grid makes the residual diverge like h²/d⁴, so such draws cannot
/// be certified by this oracle at any step), and the mixed fourth
/// log-derivatives driving the cross-stencil truncation must stay below
/// `d4_bound` (the convergence claims hold where the field and its
/// derivatives are O(1)).
pub(crate) fn field_is_tame<F>(field: &F, n: usize, bound: f64, d4_bound: f64) -> bool
where
    F: Fn(i64, crate::model::Point) -> crate::Result<Complex64>,
{
    use crate::model::Point;
    // magnitude probe, coarse then fine
    for probe in [5usize, 9] {
        for i in 0..probe {
            for j in 0..probe {
                let s = (probe - 1) as f64;
                let pt = Point::new(-1.3 + 2.6 * i as f64 / s, -1.3 + 2.6 * j as f64 / s);
                for alpha in 0..n as i64 {
                    match field(alpha, pt) {
                        Ok(g) if (1.0 / bound..bound).contains(&g.norm()) => {}
                        _ => return false,
                    }
                }
            }
        }
    }
    // derivative probe: |∂³₊∂₋ log Γ| + |∂₊∂³₋ log Γ| by coarse divided
    // differences of branch-normalized logarithms; the lattice spacing
    // stays below the narrowest transition width so walls cannot slip
    // between probe points. The field must also show genuine variation
    // somewhere on the window — a ratio test on a residual at the noise
    // floor is meaningless.
    let hh = 0.1;
    let mut activity = 0.0f64;
    for i in 0..13 {
        for j in 0..13 {
            let pt = Point::new(-1.15 + 2.3 * i as f64 / 12.0, -1.15 + 2.3 * j as f64 / 12.0);
            for alpha in 0..n as i64 {
                let value =
                    |dm: f64, dp: f64| field(alpha, Point::new(pt.zm + dm * hh, pt.zp + dp * hh));
                let estimate = (|| -> crate::Result<(f64, f64)> {
                    let dlog_m = |dp: f64| -> crate::Result<Complex64> {
                        Ok((value(1.0, dp)? / value(-1.0, dp)?).ln() / (2.0 * hh))
                    };
                    let t1 = (dlog_m(2.0)? - 2.0 * dlog_m(1.0)? + 2.0 * dlog_m(-1.0)?
                        - dlog_m(-2.0)?)
                        / (2.0 * hh * hh * hh);
                    let dlog_p = |dm: f64| -> crate::Result<Complex64> {
                        Ok((value(dm, 1.0)? / value(dm, -1.0)?).ln() / (2.0 * hh))
                    };
                    let t2 = (dlog_p(2.0)? - 2.0 * dlog_p(1.0)? + 2.0 * dlog_p(-1.0)?
                        - dlog_p(-2.0)?)
                        / (2.0 * hh * hh * hh);
                    let first = dlog_m(0.0)?.norm() + dlog_p(0.0)?.norm();
                    Ok((t1.norm() + t2.norm(), first))
                })();
                match estimate {
                    Ok((v, first)) if v <= d4_bound => activity = activity.max(first),
                    _ => return false,
                }
            }
        }
    }
    activity >= 0.2
}

pub(crate) fn powers_separated(n: usize, mu: &[Complex64], nu: &[Complex64], margin: f64) -> bool {
    let mp: Vec<Complex64> = mu.iter().map(|z| z.powu(n as u32)).collect();
    let np: Vec<Complex64> = nu.iter().map(|z| z.powu(n as u32)).collect();
    let sep = |a: Complex64, b: Complex64| (a - b).norm() > margin * a.norm().max(b.norm());
    for i in 0..mp.len() {
        for j in 0..mp.len() {
            if i != j && !sep(mp[i], mp[j]) {
                return false;
            }
        }
    }
    for i in 0..np.len() {
        for j in 0..np.len() {
            if i != j && !sep(np[i], np[j]) {
                return false;
            }
        }
    }
    for i in 0..np.len() {
        for j in 0..mp.len() {
            if !sep(np[i], mp[j]) {
                return false;
            }
        }
    }
    true
}
