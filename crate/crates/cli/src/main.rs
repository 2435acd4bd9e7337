//! `curvelrc`: build, verify and exercise locally repairable codes from
//! algebraic curves.
//!
//! Exit codes: 0 success, 1 runtime, I/O or recipe error, 2 usage error,
//! 3 distance abstained, 4 verification failed.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};

use curvelrc::artifact::CodeArtifact;
use curvelrc::par::Exec;
use curvelrc::recipes::{family, Family, OrbitFamily, Orientation};
use curvelrc::repairsim::{run_campaign, sweep_patterns};
use curvelrc::verify::{verify_code, DistanceMode, DistanceVerdict, VerificationReport, Verdict, VerifyOptions, DEFAULT_BUDGET};

const EXIT_ERROR: u8 = 1;
const EXIT_ABSTAINED: u8 = 3;
const EXIT_FAILED: u8 = 4;

#[derive(Parser)]
#[command(name = "curvelrc", version, about = "Optimal (r, delta) locally repairable codes from algebraic curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a code and write its artifact.
    Construct {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        m: usize,
        /// Distance check embedded in the artifact.
        #[arg(long, default_value = "certify", value_parser = parse_mode)]
        distance: DistanceMode,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Re-verify an artifact from its generator matrix alone.
    Verify {
        artifact: PathBuf,
        #[arg(long, default_value = "auto", value_parser = parse_mode)]
        distance: DistanceMode,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Run on the calling thread only.
        #[arg(long)]
        sequential: bool,
        /// Print the full report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Erase symbols inside repair groups and repair them locally.
    RepairSim {
        artifact: PathBuf,
        #[arg(long)]
        erasures: usize,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also try every erasure pattern of this size in every group.
        #[arg(long)]
        exhaustive: bool,
        /// Skip the check that the artifact carries a passing report.
        #[arg(long)]
        force: bool,
    },
    /// Describe a family without building a code.
    Info {
        #[command(flatten)]
        family: FamilyArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyName {
    EffInvolution,
    EffNoninvolution,
    #[value(name = "genus2-43")]
    Genus2,
    Hyperelliptic,
    Normtrace,
    Hermitian,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrientationArg {
    Primary,
    Reversed,
}

#[derive(Args)]
struct FamilyArgs {
    #[arg(long, value_enum)]
    family: FamilyName,
    #[arg(long)]
    q: Option<u32>,
    #[arg(long)]
    h: Option<u64>,
    #[arg(long)]
    g: Option<u32>,
    #[arg(long, allow_negative_numbers = true)]
    gprime: Option<i32>,
    #[arg(long)]
    qbar: Option<u32>,
    #[arg(long)]
    s: Option<u32>,
    #[arg(long)]
    b: Option<u64>,
    #[arg(long)]
    c: Option<u32>,
    #[arg(long, default_value_t = 0)]
    bprime: u32,
    #[arg(long, value_enum, default_value = "primary")]
    orientation: OrientationArg,
    /// Field modulus coefficients, lowest first, e.g. 2,4,1.
    #[arg(long, value_delimiter = ',')]
    modulus: Option<Vec<u32>>,
}

fn parse_mode(s: &str) -> Result<DistanceMode, String> {
    s.parse()
}

fn required<T>(v: Option<T>, flag: &str, fam: &str) -> T {
    v.unwrap_or_else(|| {
        Cli::command()
            .error(ErrorKind::MissingRequiredArgument, format!("--{flag} is required for --family {fam}"))
            .exit()
    })
}

impl FamilyArgs {
    fn family(&self) -> Family {
        let orientation = match self.orientation {
            OrientationArg::Primary => Orientation::Primary,
            OrientationArg::Reversed => Orientation::Reversed,
        };
        match self.family {
            FamilyName::EffInvolution => Family::EllipticInvolution {
                q: required(self.q, "q", "eff-involution"),
                h: required(self.h, "h", "eff-involution"),
                orientation,
            },
            FamilyName::EffNoninvolution => {
                Family::EllipticOrderThree { q: required(self.q, "q", "eff-noninvolution"), orientation }
            }
            FamilyName::Genus2 => Family::Genus2 { q: required(self.q, "q", "genus2-43") },
            FamilyName::Hyperelliptic => Family::Hyperelliptic {
                q: required(self.q, "q", "hyperelliptic"),
                g: required(self.g, "g", "hyperelliptic"),
                g_prime: required(self.gprime, "gprime", "hyperelliptic"),
            },
            FamilyName::Normtrace => Family::NormTrace {
                qbar: required(self.qbar, "qbar", "normtrace"),
                s: required(self.s, "s", "normtrace"),
                b: required(self.b, "b", "normtrace"),
                c: required(self.c, "c", "normtrace"),
                b_prime: self.bprime,
            },
            FamilyName::Hermitian => Family::Hermitian {
                qbar: required(self.qbar, "qbar", "hermitian"),
                s: required(self.s, "s", "hermitian"),
                b: required(self.b, "b", "hermitian"),
                b_prime: self.bprime,
            },
        }
    }

    fn setup(&self) -> Result<OrbitFamily> {
        let spec = self.family();
        Ok(family(&spec, self.modulus.as_deref()).with_context(|| format!("setting up {}", spec.name()))?)
    }
}

fn exit_for(verdict: Verdict) -> u8 {
    match verdict {
        Verdict::Exact | Verdict::Certified => 0,
        Verdict::Abstained => EXIT_ABSTAINED,
        Verdict::Failed => EXIT_FAILED,
    }
}

fn distance_line(report: &VerificationReport) -> String {
    match &report.distance {
        DistanceVerdict::Exact { d, messages } => format!("d = {d} (exhaustive, {messages} messages)"),
        DistanceVerdict::Certified { lower, upper } if lower == upper => format!("d = {lower} (certified)"),
        DistanceVerdict::Certified { lower, upper } => format!("{lower} <= d <= {upper} (certified bounds)"),
        DistanceVerdict::Abstained { reason } => format!("distance abstained: {reason}"),
        DistanceVerdict::CertificateFailed { weight, expected } => {
            format!("certificate failed: weight {weight}, expected {expected}")
        }
    }
}

fn print_report(report: &VerificationReport) {
    println!("dimension: rank {} of k = {} ({})", report.rank, report.k, if report.dimension_ok { "ok" } else { "FAIL" });
    let ok = report.locality.iter().filter(|g| g.ok).count();
    println!("locality: {ok}/{} groups pass", report.locality.len());
    println!("{}", distance_line(report));
    println!("singleton bound {}, defect {}", report.singleton_bound, report.singleton_defect);
    println!("length bound: {:?}", report.appendix);
    for f in &report.failures {
        println!("failure: {f}");
    }
    println!("verdict: {:?}", report.verdict);
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Construct { family, t, m, distance, budget, out } => {
            let fam = family.setup()?;
            let code = fam.build(t, m).context("building the code")?;
            let opts = VerifyOptions { mode: distance, budget, exec: Exec::default() };
            let report = verify_code(&code, &opts);
            CodeArtifact::from_code(&code, Some(&report)).save(&out).with_context(|| format!("writing {}", out.display()))?;
            println!(
                "[{}, {}, {}]_{} (r, delta) = ({}, {}), t = {}, m = {}, ell = {}",
                code.n,
                code.k,
                code.d_designed,
                code.q(),
                code.r,
                code.delta,
                code.t,
                code.m,
                fam.ell()
            );
            print_report(&report);
            println!("wrote {}", out.display());
            Ok(exit_for(report.verdict))
        }
        Command::Verify { artifact, distance, budget, sequential, json } => {
            let art = CodeArtifact::load(&artifact).with_context(|| format!("reading {}", artifact.display()))?;
            let code = art.to_code()?;
            let exec = if sequential { Exec::Sequential } else { Exec::default() };
            let report = verify_code(&code, &VerifyOptions { mode: distance, budget, exec });
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                println!("[{}, {}, {}]_{} from {}", code.n, code.k, code.d_designed, code.q(), code.provenance.recipe);
                print_report(&report);
                match &art.report {
                    Some(prev) if prev.distance_mode == report.distance_mode => {
                        let same = prev == &report;
                        println!("embedded report: {}", if same { "reproduced" } else { "differs" });
                    }
                    Some(_) => println!("embedded report: made in another distance mode"),
                    None => println!("embedded report: absent"),
                }
            }
            Ok(exit_for(report.verdict))
        }
        Command::RepairSim { artifact, erasures, trials, seed, exhaustive, force } => {
            let art = CodeArtifact::load(&artifact).with_context(|| format!("reading {}", artifact.display()))?;
            if !force && !art.report.as_ref().is_some_and(VerificationReport::passed) {
                bail!("artifact carries no passing verification report; rerun verify or pass --force");
            }
            let code = art.to_code()?;
            let stats = run_campaign(&code, trials, erasures, seed, Exec::default());
            println!("{}", serde_json::to_string_pretty(&stats)?);
            if exhaustive {
                println!("{}", serde_json::to_string_pretty(&sweep_patterns(&code, erasures, seed))?);
            }
            Ok(0)
        }
        Command::Info { family } => {
            let fam = family.setup()?;
            println!("recipe: {}", fam.provenance.recipe);
            println!("field: q = {}", fam.curve.field().q());
            println!("curve genus {}, {} rational places", fam.curve.genus(), fam.num_places());
            println!("(r, delta) = ({}, {}), group size {}", fam.r, fam.delta, fam.group_order);
            println!("ell: {} usable groups, formula gives {}", fam.ell(), fam.ell_formula);
            println!("range: 1 <= t < m <= {}", fam.ell());
            println!("optimal: {}", fam.optimal);
            for note in &fam.notes {
                println!("note: {note}");
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
