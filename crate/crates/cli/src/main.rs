//! Seeded experiment runner. Every subcommand emits CSV (stdout or `--out`)
//! with a full parameter echo per row and exits nonzero when an in-run
//! contract fails.

mod cmds;
mod common;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "cutstream",
    version,
    about = "Max-cut streaming hardness experiments",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write an instance edge-list or a stream file in the shared formats.
    Gen(cmds::gen::Args),
    /// Max-cut vs edge count on the phased hard distribution.
    Gap(cmds::gap::Args),
    /// Cycle and complex-component frequencies of sparse random graphs.
    Cycles(cmds::cycles::Args),
    /// Duplicate-edge and collision statistics of stream orderings.
    Ordering(cmds::ordering::Args),
    /// Fourier identity, distance chain, weight-mass and solution sweeps.
    Fourier(cmds::fourier::Args),
    /// State-distribution curves, informative indices and protocol advantage.
    Advantage(cmds::advantage::Args),
    /// Hypermatching gadget end-to-end correctness.
    Bhh(cmds::bhh::Args),
    /// I.i.d.-sample stream statistics.
    Iid(cmds::iid::Args),
    /// Drive a named streaming algorithm and report output and peak bits.
    Run(cmds::run::Args),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.cmd {
        Cmd::Gen(args) => cmds::gen::run(args),
        Cmd::Gap(args) => cmds::gap::run(args),
        Cmd::Cycles(args) => cmds::cycles::run(args),
        Cmd::Ordering(args) => cmds::ordering::run(args),
        Cmd::Fourier(args) => cmds::fourier::run(args),
        Cmd::Advantage(args) => cmds::advantage::run(args),
        Cmd::Bhh(args) => cmds::bhh::run(args),
        Cmd::Iid(args) => cmds::iid::run(args),
        Cmd::Run(args) => cmds::run::run(args),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("cutstream: an in-run contract failed (see the CSV)");
            ExitCode::from(1)
        }
        Err(err) => {
            eprintln!("cutstream: {err:#}");
            ExitCode::from(2)
        }
    }
}
