//! `ordering`: union-multiplicity histogram of the phased distribution and
//! the collision fraction of uniform permutations, scaled by
//! `alpha ln(1/alpha)`.

use anyhow::Result;
use cutstream::dist::{self, HardDistParams};
use cutstream::rng;
use rayon::prelude::*;

use crate::common::{build_tag, csv_writer, fmt_f64, ns, CommonArgs};

#[derive(Debug, clap::Args)]
pub struct Args {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Alpha grid for the collision sweep.
    #[arg(long, default_value = "0.02,0.05,0.1", value_delimiter = ',')]
    pub alphas: Vec<f64>,
    /// Uniform permutations sampled per instance.
    #[arg(long, default_value_t = 100)]
    pub perms: usize,
}

pub fn run(args: Args) -> Result<bool> {
    let c = &args.common;
    let n = c.n.unwrap_or(10_000);
    let trials = c.trials.unwrap_or(2_000) as u64;
    // The histogram pins alpha = 1/ln n and a small phase count, the regime
    // where the no-triple-edge event is overwhelming.
    let alpha = c.alpha.unwrap_or(1.0 / (n as f64).ln());
    let params = match c.k {
        Some(k) => HardDistParams::with_k(n, alpha, c.eps.unwrap_or(0.3), k)?,
        None => HardDistParams::with_k(n, alpha, c.eps.unwrap_or(0.3), 6)?,
    };

    let mut writer = csv_writer(&c.out)?;
    writer.write_record([
        "build", "seed", "record", "alpha", "k", "trials", "mult1", "mult2", "mult3_plus",
        "collision_fraction", "scaled_fraction",
    ])?;

    let labels = c.case.labels();
    let (m1, m2, m3): (u64, u64, u64) = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut r = rng::trial(c.seed, ns::ORDERING_HIST, t);
            let label = labels[(t % labels.len() as u64) as usize];
            let inst = dist::sample_hard(&params, label, &mut r).unwrap();
            let mut out = (0u64, 0u64, 0u64);
            for (_, count) in inst.union.edge_multiplicities() {
                match count {
                    1 => out.0 += 1,
                    2 => out.1 += 1,
                    _ => out.2 += 1,
                }
            }
            out
        })
        .reduce(
            || (0, 0, 0),
            |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2),
        );
    let mut all_ok = m3 == 0;
    writer.write_record([
        build_tag().to_string(),
        c.seed.to_string(),
        "multiplicity".into(),
        fmt_f64(alpha),
        params.k.to_string(),
        trials.to_string(),
        m1.to_string(),
        m2.to_string(),
        m3.to_string(),
        String::new(),
        String::new(),
    ])?;

    // Collision sweep in the unsaturated regime.
    let instances = c.trials.unwrap_or(100).min(1_000) as u64;
    let mut scaled_all = Vec::new();
    for (i, &alpha) in args.alphas.iter().enumerate() {
        let params = HardDistParams::new(n, alpha, 0.5, 0.8)?;
        let total: f64 = (0..instances)
            .into_par_iter()
            .map(|t| {
                let mut r = rng::trial(c.seed, ns::ORDERING_COLLISION + i as u64, t);
                let label = labels[(t % labels.len() as u64) as usize];
                let inst = dist::sample_hard(&params, label, &mut r).unwrap();
                dist::collision_fraction(&inst, None, args.perms, &mut r)
            })
            .sum();
        let fraction = total / instances as f64;
        let scaled = fraction / (alpha * (1.0 / alpha).ln());
        scaled_all.push(scaled);
        writer.write_record([
            build_tag().to_string(),
            c.seed.to_string(),
            "collision".into(),
            fmt_f64(alpha),
            params.k.to_string(),
            instances.to_string(),
            String::new(),
            String::new(),
            String::new(),
            fmt_f64(fraction),
            fmt_f64(scaled),
        ])?;
    }
    if scaled_all.len() >= 2 {
        let max = scaled_all.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = scaled_all.iter().cloned().fold(f64::INFINITY, f64::min);
        if max / min > 3.0 {
            all_ok = false;
        }
    }
    writer.flush()?;
    Ok(all_ok)
}
