//! `iid`: duplicate-within-phase frequency against `k alpha^2` scaling,
//! bipartition product concentration, and stream-length attainment.

use std::collections::HashSet;

use anyhow::Result;
use cutstream::dist::{self, HardDistParams};
use cutstream::graph::Bipartition;
use cutstream::rng;
use rayon::prelude::*;

use crate::common::{build_tag, csv_writer, fmt_f64, ns, CommonArgs};

#[derive(Debug, clap::Args)]
pub struct Args {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Alpha grid for the duplicate-frequency sweep.
    #[arg(long, default_value = "0.05,0.1,0.2", value_delimiter = ',')]
    pub alphas: Vec<f64>,
}

pub fn run(args: Args) -> Result<bool> {
    let c = &args.common;
    let n = c.n.unwrap_or(400);
    let eps = c.eps.unwrap_or(0.9);
    let c_phase = c.c_phase.unwrap_or(8.0);
    let ell = c.ell.unwrap_or(1);
    let trials = c.trials.unwrap_or(200) as u64;
    let labels = c.case.labels();

    let mut writer = csv_writer(&c.out)?;
    writer.write_record([
        "build", "seed", "record", "alpha", "k", "trials", "value", "scaled_or_bound", "pass",
    ])?;
    let mut all_ok = true;

    // Duplicate-within-phase frequency, scaled by k alpha^2.
    let mut scaled_all = Vec::new();
    for (i, &alpha) in args.alphas.iter().enumerate() {
        let params = HardDistParams::with_ell(n, alpha, eps, c_phase, ell)?;
        let hits: u64 = (0..trials)
            .into_par_iter()
            .map(|t| {
                let mut r = rng::trial(c.seed, ns::IID_DUP + i as u64, t);
                let label = labels[(t % labels.len() as u64) as usize];
                let (_, blocks) = dist::iid_phased_blocks(&params, ell, label, &mut r).unwrap();
                let mut seen = HashSet::new();
                blocks.iter().any(|block| {
                    seen.clear();
                    block.iter().any(|e| !seen.insert(*e))
                }) as u64
            })
            .sum();
        let freq = hits as f64 / trials as f64;
        let scale = params.k as f64 * alpha * alpha;
        let scaled = freq / scale;
        scaled_all.push(scaled);
        writer.write_record([
            build_tag().to_string(),
            c.seed.to_string(),
            "phase-duplicate".into(),
            fmt_f64(alpha),
            params.k.to_string(),
            trials.to_string(),
            fmt_f64(freq),
            fmt_f64(scaled),
            String::new(),
        ])?;
    }
    if scaled_all.len() >= 2 {
        let max = scaled_all.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = scaled_all.iter().cloned().fold(f64::INFINITY, f64::min);
        if max / min > 3.0 {
            all_ok = false;
        }
    }

    // |P||Q| concentration: tail frequency against the Hoeffding bound
    // 2 e^(-2 delta) plus three sigma of the estimator.
    let pq_trials = (trials * 50).max(10_000);
    for delta in [1.0f64, 2.0, 4.0] {
        let exceed: u64 = (0..pq_trials)
            .into_par_iter()
            .map(|t| {
                let mut r = rng::trial(c.seed, ns::IID_PQ, t);
                let r_part = Bipartition::random(n, &mut r);
                let (p, q) = r_part.side_sizes();
                let dev = ((p * q) as f64 - (n as f64 / 2.0).powi(2)).abs();
                (dev > delta * n as f64) as u64
            })
            .sum();
        let freq = exceed as f64 / pq_trials as f64;
        let bound = 2.0 * (-2.0 * delta).exp();
        let ok = freq <= bound + 3.0 * (bound.max(1e-9) / pq_trials as f64).sqrt();
        all_ok &= ok;
        writer.write_record([
            build_tag().to_string(),
            c.seed.to_string(),
            "pq-tail".into(),
            fmt_f64(delta),
            String::new(),
            pq_trials.to_string(),
            fmt_f64(freq),
            fmt_f64(bound),
            ok.to_string(),
        ])?;
    }

    // Stream length attains ell * n with k = C ell / (alpha eps^2), C = 8.
    let alpha = c.alpha.unwrap_or(0.1);
    let params = HardDistParams::with_ell(n, alpha, eps, 8.0, ell)?;
    let attained: u64 = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut r = rng::trial(c.seed, ns::IID_LENGTH, t);
            let label = labels[(t % labels.len() as u64) as usize];
            let (counts, _) = dist::iid_phased_blocks(&params, ell, label, &mut r).unwrap();
            (counts.total() >= (ell * n) as u64) as u64
        })
        .sum();
    let frac = attained as f64 / trials as f64;
    let ok = frac >= 0.99;
    all_ok &= ok;
    writer.write_record([
        build_tag().to_string(),
        c.seed.to_string(),
        "length-attained".into(),
        fmt_f64(alpha),
        params.k.to_string(),
        trials.to_string(),
        fmt_f64(frac),
        fmt_f64((ell * n) as f64),
        ok.to_string(),
    ])?;

    writer.flush()?;
    Ok(all_ok)
}
