use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::QuantityContext;
use crate::poly::{from_f64, Rational};
use crate::report::ser_f64;

/// Empirical slow-variation constant of one weight.
#[derive(Clone, Debug, Serialize)]
pub struct SlowVariationStat {
    /// `max max(W(p)/W(p̃), W(p̃)/W(p))` over admissible pairs; 1 when none.
    #[serde(serialize_with = "ser_f64")]
    pub c_star: f64,
    /// The constant the scan is checked against.
    #[serde(serialize_with = "ser_f64")]
    pub bound: f64,
    #[serde(serialize_with = "ser_f64")]
    pub r0: f64,
    pub admissible: usize,
    pub attempts: usize,
}

impl SlowVariationStat {
    pub fn within_bound(&self) -> bool {
        self.c_star <= self.bound
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SlowVariationReport {
    pub seed: u64,
    pub m1: SlowVariationStat,
    pub m2: SlowVariationStat,
    pub g: SlowVariationStat,
}

/// `(bound, r0)` for a weight of `terms` summands in one variable:
/// `C* = (L+2)²`, `r0 = (L+2)⁻²/2`.
fn one_variable_constants(top: Option<u32>) -> (f64, f64) {
    let c = (top.unwrap_or(0) as f64 + 2.0).powi(2);
    (c, 0.5 / c)
}

/// `G` has `N = m(m+3)/2` summands; the Taylor argument gives
/// `C* = N(m+1)` with `r0 = 1/(2C*)`.
fn g_constants(m: u32) -> (f64, f64) {
    let n = (m * (m + 3) / 2).max(1) as f64;
    let c = n * (m as f64 + 1.0);
    (c, 0.5 / c)
}

#[derive(Clone, Copy)]
enum Weight {
    M1,
    M2,
    G,
}

/// Samples base points `p` in the box `(-delta, delta)²` and displacements
/// `p̃ = p + t·r0/W(p)·e` with `t ∈ (-1.5, 1.5)`; a pair is admissible when
/// `|p - p̃|·W(p) < r0`, `W(p) > 0` and (for `M1`, `M2`) the frozen
/// coordinate lies in `N1` (resp. `N2`).
///
/// `r0` overrides the per-weight default radius. Deterministic in `seed`.
pub fn slow_variation_scan(
    ctx: &QuantityContext,
    delta: f64,
    r0: Option<f64>,
    n_pairs: usize,
    seed: u64,
) -> SlowVariationReport {
    let (b1, r1) = one_variable_constants(ctx.l);
    let (b2, r2) = one_variable_constants(ctx.d);
    let (bg, rg) = g_constants(ctx.m);
    let m1 = scan(ctx, Weight::M1, delta, r0.unwrap_or(r1), b1, n_pairs, seed, 0);
    let m2 = scan(ctx, Weight::M2, delta, r0.unwrap_or(r2), b2, n_pairs, seed, 1);
    let g = scan(ctx, Weight::G, delta, r0.unwrap_or(rg), bg, n_pairs, seed, 2);
    SlowVariationReport { seed, m1, m2, g }
}

struct Draw {
    p: (f64, f64),
    t: f64,
    angle: f64,
}

#[allow(clippy::too_many_arguments)]
fn scan(
    ctx: &QuantityContext,
    w: Weight,
    delta: f64,
    r0: f64,
    bound: f64,
    n_pairs: usize,
    seed: u64,
    stream: u64,
) -> SlowVariationStat {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let max_attempts = 20 * n_pairs + 1000;
    let batch = n_pairs.clamp(64, 4096);
    let mut attempts = 0;
    let mut admissible = 0;
    let mut c_star: f64 = 1.0;

    while admissible < n_pairs && attempts < max_attempts {
        let draws: Vec<Draw> = (0..batch)
            .map(|_| Draw {
                p: (rng.gen_range(-delta..delta), rng.gen_range(-delta..delta)),
                t: rng.gen_range(-1.5..1.5),
                angle: rng.gen_range(0.0..std::f64::consts::TAU),
            })
            .collect();
        let ratios: Vec<Option<f64>> = draws.par_iter().map(|d| evaluate(ctx, w, r0, d)).collect();
        for r in ratios {
            if admissible >= n_pairs || attempts >= max_attempts {
                break;
            }
            attempts += 1;
            if let Some(r) = r {
                admissible += 1;
                c_star = c_star.max(r.max(1.0 / r));
            }
        }
    }
    SlowVariationStat { c_star, bound, r0, admissible, attempts }
}

fn evaluate(ctx: &QuantityContext, w: Weight, r0: f64, d: &Draw) -> Option<f64> {
    if d.t.abs() >= 1.0 {
        return None;
    }
    let (x, y) = d.p;
    let (xr, yr): (Rational, Rational) = (from_f64(x), from_f64(y));
    match w {
        Weight::M1 => {
            if !ctx.in_n1(&yr) {
                return None;
            }
            let m = ctx.m1(&xr, &yr);
            let xt = x + d.t * r0 / m;
            (m > 0.0 && (x - xt).abs() * m < r0).then(|| m / ctx.m1(&from_f64(xt), &yr))
        }
        Weight::M2 => {
            if !ctx.in_n2(&xr) {
                return None;
            }
            let m = ctx.m2(&xr, &yr);
            let yt = y + d.t * r0 / m;
            (m > 0.0 && (y - yt).abs() * m < r0).then(|| m / ctx.m2(&xr, &from_f64(yt)))
        }
        Weight::G => {
            let g = ctx.g(&xr, &yr);
            let s = d.t * r0 / g;
            let (xt, yt) = (x + s * d.angle.cos(), y + s * d.angle.sin());
            let dist = (x - xt).hypot(y - yt);
            (g > 0.0 && dist * g < r0).then(|| g / ctx.g(&from_f64(xt), &from_f64(yt)))
        }
    }
}
