//! Randomized sweeps over the pointwise lemmas. Sample `i` of a sweep draws
//! from its own stream `rng_for(seed ^ tag, i)`, so results are identical
//! across thread counts.

use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::boundary::{build_q, mean_curvature_bound, BoundaryData};
use crate::clifford::Sector;
use crate::exterior::{hodge_star, sec_min_bruteforce, CurvatureOperator};
use crate::families::{fubini_study, product_spheres, round_sphere};
use crate::sampling::{
    random_area_nonincreasing, random_bianchi, random_map, random_mixed_bianchi, random_psd, random_psd3,
    random_sec_nonneg, random_sec_nonneg_signed, random_stretching_area_nonincreasing, rng_for,
};
use crate::smallmat::{largest_singular_value, SelfAdjoint};
use crate::thorpe::tau_interval;
use crate::weitzenbock::{build_t_endo, check_rt_identity, rigidity_probe, trace_bound};

/// Outcome of one sample: the monitored quantity and whether it passed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sample {
    pub value: f64,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSummary {
    pub name: &'static str,
    /// What `worst` measures.
    pub quantity: &'static str,
    pub samples: usize,
    pub failures: usize,
    pub worst: f64,
    pub worst_index: usize,
}

impl SweepSummary {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Runs `f` on `n` independent streams and summarizes. `higher_is_better`
/// selects whether `worst` is the minimum or maximum value.
pub fn run_sweep<F>(name: &'static str, quantity: &'static str, higher_is_better: bool, seed: u64, tag: u64, n: usize, f: F) -> SweepSummary
where
    F: Fn(&mut ChaCha8Rng) -> Sample + Sync,
{
    let results: Vec<Sample> = (0..n)
        .into_par_iter()
        .map(|i| f(&mut rng_for(seed ^ tag, i as u64)))
        .collect();
    let failures = results.iter().filter(|s| !s.ok).count();
    let mut worst_index = 0;
    for (i, s) in results.iter().enumerate() {
        let w = results[worst_index].value;
        let worse = if higher_is_better { s.value < w } else { s.value > w };
        if worse || s.value.is_nan() {
            worst_index = i;
        }
    }
    let worst = results.get(worst_index).map_or(f64::NAN, |s| s.value);
    SweepSummary { name, quantity, samples: n, failures, worst, worst_index }
}

/// `𝓡 = 𝓣 − ¼tr(L*RL) − ⅛scal` for random Bianchi `R` and arbitrary `l`.
pub fn sweep_rt_identity(seed: u64, n: usize) -> SweepSummary {
    run_sweep("rt-identity", "residual / allowed", false, seed, 0x01, n, |rng| {
        let r = random_bianchi(rng);
        let l = random_map(rng);
        let c = check_rt_identity(&r, &l).expect("valid inputs");
        Sample { value: c.residual / c.allowed, ok: c.passed() }
    })
}

/// `𝓣(GᵀG, L) ⪰ 0` on the whole tensor product.
pub fn sweep_t_psd(seed: u64, n: usize) -> SweepSummary {
    run_sweep("t-psd", "min eig / (1+|S|)", true, seed, 0x02, n, |rng| {
        let s = random_psd(6, rng);
        let l = random_map(rng);
        let t = build_t_endo(&s, &l).expect("valid inputs");
        let m = t.matrix.min_eigenvalue().expect("Hermitian") / (1.0 + largest_singular_value(&s));
        Sample { value: m, ok: m >= -1e-9 }
    })
}

/// `𝓣(★, L)` is PSD on `S⁺⊗S⁺` and NSD on `S⁻⊗S⁻` for area-nonincreasing
/// `l`, half of them stretching some direction.
pub fn sweep_star_sign(seed: u64, n: usize) -> SweepSummary {
    let star = hodge_star();
    run_sweep("star-sign", "min(min eig ++, -max eig --)", true, seed, 0x03, n, |rng| {
        let l = if rand::Rng::random_bool(rng, 0.5) {
            random_area_nonincreasing(rng)
        } else {
            random_stretching_area_nonincreasing(rng)
        };
        let t = build_t_endo(&star, &l).expect("valid inputs");
        let m = t
            .min_eigenvalue_on(Sector::PLUS_PLUS)
            .min(-t.max_eigenvalue_on(Sector::MINUS_MINUS));
        Sample { value: m, ok: m >= -1e-9 }
    })
}

/// `𝓣(R, L)|₊₊ ⪰ 0` when `R + τ★ ⪰ 0` for some `τ ≤ 0`.
pub fn sweep_decomposition(seed: u64, n: usize) -> SweepSummary {
    run_sweep("decomposition", "min eig ++ / (1+|R|)", true, seed, 0x04, n, |rng| {
        let (r, _) = random_sec_nonneg_signed(true, rng);
        let l = random_area_nonincreasing(rng);
        let t = build_t_endo(r.matrix(), &l).expect("valid inputs");
        let m = t.min_eigenvalue_on(Sector::PLUS_PLUS) / (1.0 + r.spectral_norm());
        Sample { value: m, ok: m >= -1e-9 }
    })
}

/// `tr(L*RL) ≤ ½scal` for `sec ≥ 0` and area-nonincreasing `l`.
pub fn sweep_trace_bound(seed: u64, n: usize) -> SweepSummary {
    run_sweep("trace-bound", "slack / (1+|R|)", true, seed, 0x05, n, |rng| {
        let (r, _) = random_sec_nonneg(rng);
        let l = random_area_nonincreasing(rng);
        match trace_bound(&r, &l) {
            Ok(b) => {
                let m = b.slack / (1.0 + r.spectral_norm());
                Sample { value: m, ok: m >= -1e-9 }
            }
            Err(_) => Sample { value: f64::NEG_INFINITY, ok: false },
        }
    })
}

/// Agreement between the shift interval and a brute-force plane search.
/// Disagreements within `|min sec| ≤ 1e-4` count as passes.
pub fn sweep_finsler_thorpe(seed: u64, n: usize, density: usize) -> SweepSummary {
    run_sweep("finsler-thorpe", "|grid min sec| on disagreement", false, seed, 0x06, n, |rng| {
        let r = random_mixed_bianchi(rng);
        let scale = r.spectral_norm().max(1e-300);
        let feasible = !tau_interval(&r).is_empty();
        let grid = sec_min_bruteforce(r.matrix(), density).value / scale;
        let agree = feasible == (grid >= -1e-6);
        let value = if agree { 0.0 } else { grid.abs() };
        Sample { value, ok: agree || grid.abs() <= 1e-4 }
    })
}

/// `λmin(−A − ½(H_N − H_M))|₊₊ ≥ 0` for `II ⪰ 0` and `H_N ≥ tr II`, with
/// `tr Q = tr II` and the Bianchi identity for `Q`.
pub fn sweep_boundary(seed: u64, n: usize) -> SweepSummary {
    run_sweep("boundary", "mean-curvature bound", true, seed, 0x07, n, |rng| {
        let ii = random_psd3(rng);
        let h_n = ii.trace() + rand::Rng::random_range(rng, 0.0..1.0);
        let bd = BoundaryData::new(ii.clone(), h_n).expect("valid boundary data");
        let q = build_q(&bd).expect("valid boundary data");
        let bound = mean_curvature_bound(&bd).expect("II is PSD");
        let ok = bound >= -1e-9 && q.matrix().trace() == ii.trace() && q.bianchi_residual() <= 1e-10;
        Sample { value: bound, ok }
    })
}

/// Rigidity probes on the model operators that satisfy `½scal·g ≻ Ric ≻ 0`.
pub fn rigidity_models() -> Vec<(&'static str, CurvatureOperator)> {
    vec![
        ("rigidity-round", round_sphere(1.0).expect("positive radius").r),
        ("rigidity-fubini-study", fubini_study().r),
        ("rigidity-product-spheres", product_spheres(1.0, 1.0).expect("positive radii").r),
    ]
}

pub fn sweep_rigidity(seed: u64, n: usize) -> Vec<SweepSummary> {
    rigidity_models()
        .into_iter()
        .enumerate()
        .map(|(k, (name, r))| {
            let probe = rigidity_probe(&r, n, &mut rng_for(seed ^ 0x08, k as u64));
            match probe {
                Ok(p) => SweepSummary {
                    name,
                    quantity: "min trace-bound slack",
                    samples: n,
                    failures: usize::from(p.min_slack <= 0.0),
                    worst: p.min_slack,
                    worst_index: 0,
                },
                Err(_) => SweepSummary { name, quantity: "hypothesis", samples: 0, failures: 1, worst: f64::NAN, worst_index: 0 },
            }
        })
        .collect()
}

/// All lemma sweeps with `n` samples each.
pub fn all_sweeps(seed: u64, n: usize) -> Vec<SweepSummary> {
    let mut out = vec![
        sweep_rt_identity(seed, n),
        sweep_t_psd(seed, n),
        sweep_star_sign(seed, n),
        sweep_decomposition(seed, n),
        sweep_trace_bound(seed, n),
        sweep_finsler_thorpe(seed, n, 40),
        sweep_boundary(seed, n),
    ];
    out.extend(sweep_rigidity(seed, n));
    out
}
