//! Command-line front end. Exit codes: 0 = all hard assertions passed,
//! 2 = a hard (proven) inequality was violated, 1 = usage or runtime error.

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, Subcommand};

use cusick::bounds::{self, TheoremReport};
use cusick::delta;
use cusick::fourier::{self, RationalAngle};
use cusick::harness::{sweep, CheckSet, SweepOptions};
use cusick::oracle;
use cusick::spectrum;
use cusick::{BitWord, Dyadic};

#[derive(Parser)]
#[command(
    name = "cusick",
    version,
    about = "Exact digit-sum correlation densities and Cusick-type inequality checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the exact spectrum of t as (k, dyadic, decimal) triples
    Phi { t: String },
    /// Print the correlation density of t on a window of k
    Delta {
        t: String,
        /// half-width of the printed window (default: bit length + 2)
        #[arg(long = "k-window")]
        k_window: Option<i64>,
    },
    /// Print the exact density c_t
    Ct { t: String },
    /// Print c_t, c_t' and their exact sum
    Pair { t: String },
    /// Evaluate the characteristic function at a rational angle
    Omega {
        t: String,
        /// angle as J/M
        #[arg(long)]
        theta: String,
    },
    /// Print the exact residue-class masses mod m
    Psi {
        t: String,
        #[arg(short = 'm', long = "modulus")]
        modulus: u64,
    },
    /// Count maximal blocks of consecutive 1-digits
    Blocks { t: String },
    /// Print the selected pattern positions of t
    Patterns { t: String },
    /// Print the parameter chain and error-term margins for epsilon
    Bound {
        #[arg(long)]
        epsilon: f64,
    },
    /// Check the block theorem at (t, epsilon)
    VerifyTheorem {
        #[arg(long)]
        epsilon: f64,
        /// explicit t to test
        #[arg(long)]
        t: Option<String>,
        /// build t with exactly the required number of blocks
        #[arg(long)]
        construct: bool,
    },
    /// Brute-force histogram of s(n+t) - s(n) over n < limit
    Oracle {
        t: String,
        #[arg(long)]
        limit: u64,
    },
    /// Sweep a range of t, emitting one JSON record per value
    Sweep {
        #[arg(long)]
        from: String,
        /// exclusive upper end
        #[arg(long)]
        to: String,
        /// comma-separated subset of floor,cusick,pair,sufficient — or all
        #[arg(long, default_value = "all")]
        checks: String,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// also export decimal-only CSV
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return 1;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            1
        }
    }
}

type CliResult = Result<i32, Box<dyn std::error::Error>>;

fn parse_t(text: &str) -> Result<BitWord, cusick::Error> {
    BitWord::from_str(text)
}

fn value_pair(v: &Dyadic) -> String {
    format!("{} {}", v, v.to_decimal(12))
}

fn dispatch(command: Command) -> CliResult {
    match command {
        Command::Phi { t } => {
            let spectrum = spectrum::phi(&parse_t(&t)?)?;
            for (k, v) in spectrum.iter() {
                println!("{k} {}", value_pair(v));
            }
            Ok(0)
        }
        Command::Delta { t, k_window } => {
            let word = parse_t(&t)?;
            let dist = delta::delta_dist(&word)?;
            let width = k_window.unwrap_or(word.bit_length() as i64 + 2).abs();
            for k in -width..=width {
                println!("{k} {}", value_pair(&dist.value_at(k)));
            }
            println!("tail_start {}", dist.tail_start());
            println!("tail_value {}", value_pair(dist.tail_value()));
            Ok(0)
        }
        Command::Ct { t } => {
            let value = delta::c(&parse_t(&t)?)?;
            println!("{}", value_pair(&value));
            Ok(0)
        }
        Command::Pair { t } => {
            let pair = delta::pair_sum(&parse_t(&t)?)?;
            println!("c_t {}", value_pair(&pair.c_t));
            println!("c_t_prime {}", value_pair(&pair.c_t_prime));
            println!("pair_sum {}", value_pair(&pair.sum));
            Ok(0)
        }
        Command::Omega { t, theta } => {
            let theta = RationalAngle::from_str(&theta)?;
            let value = fourier::omega_matrix(&parse_t(&t)?, &theta)?;
            println!("({:.14e}, {:.14e})", value.re, value.im);
            Ok(0)
        }
        Command::Psi { t, modulus } => {
            let masses = fourier::psi_direct(&parse_t(&t)?, modulus)?;
            for (b, v) in masses.iter() {
                println!("{b} {}", value_pair(v));
            }
            Ok(0)
        }
        Command::Blocks { t } => {
            println!("{}", parse_t(&t)?.count_blocks());
            Ok(0)
        }
        Command::Patterns { t } => {
            let positions = parse_t(&t)?.pattern_positions()?;
            let rendered: Vec<String> = positions.iter().map(|p| p.to_string()).collect();
            println!("{}", rendered.join(" "));
            Ok(0)
        }
        Command::Bound { epsilon } => {
            let params = bounds::params_for(epsilon)?;
            print_params(&params);
            Ok(0)
        }
        Command::VerifyTheorem {
            epsilon,
            t,
            construct,
        } => {
            let word = match (t, construct) {
                (Some(text), false) => parse_t(&text)?,
                (None, true) => {
                    let params = bounds::params_for(epsilon)?;
                    BitWord::spaced_ones(params.required_blocks)
                }
                _ => {
                    return Err("pass exactly one of --t T or --construct".into());
                }
            };
            let report = bounds::verify_main_theorem(&word, epsilon)?;
            print_report(&report);
            if report.hypothesis_met && !report.inequality_holds {
                return Ok(2);
            }
            Ok(0)
        }
        Command::Oracle { t, limit } => {
            if limit == 0 {
                return Err("limit must be >= 1".into());
            }
            let histogram = oracle::histogram(&parse_t(&t)?, limit);
            for (k, count) in histogram.iter() {
                println!("{k} {count} {:.12}", histogram.density(k));
            }
            println!("c_t_estimate {:.12}", histogram.fraction_nonneg());
            Ok(0)
        }
        Command::Sweep {
            from,
            to,
            checks,
            jobs,
            out,
            checkpoint,
            csv,
        } => {
            let from = parse_t(&from)?
                .to_u64()
                .ok_or("sweep bounds must fit in 64 bits")?;
            let to = parse_t(&to)?
                .to_u64()
                .ok_or("sweep bounds must fit in 64 bits")?;
            let checks = CheckSet::parse(&checks)?;
            let options = SweepOptions {
                from,
                to,
                checks,
                jobs,
                out,
                checkpoint,
                csv,
            };
            let summary = sweep(&options)?;
            print!("{}", summary.render(&checks));
            if summary.has_hard_violation(&checks) {
                return Ok(2);
            }
            Ok(0)
        }
    }
}

fn print_params(params: &bounds::BoundParams) {
    let (tail, mean, fourier_term) = params.error_terms();
    let third = params.epsilon / 3.0;
    println!("N = {}", params.cutoff);
    println!("m = {}", params.modulus);
    println!("M = {}", params.decay_exponent);
    println!("C = {}", params.required_blocks);
    println!("term 2^-(N+2)        = {tail:.12e} (eps/3 = {third:.12e})");
    println!("term 2N/m            = {mean:.12e}");
    println!("term m*exp(-M/(2m^2)) = {fourier_term:.12e}");
    println!(
        "theorem_lower_bound  = {:.12} (1 - eps = {:.12})",
        bounds::theorem_lower_bound(params),
        1.0 - params.epsilon
    );
}

fn print_report(report: &TheoremReport) {
    print_params(&report.params);
    println!("blocks = {}", report.blocks);
    println!(
        "hypothesis_met = {} (needs >= {})",
        report.hypothesis_met, report.params.required_blocks
    );
    println!("c_t {}", value_pair(&report.pair.c_t));
    println!("c_t_prime {}", value_pair(&report.pair.c_t_prime));
    println!("pair_sum {}", value_pair(&report.pair.sum));
    println!("threshold 1-eps {}", value_pair(&report.threshold));
    println!("inequality_holds = {}", report.inequality_holds);
    println!(
        "residue_lower_bound (m = {}) {}",
        report.params.modulus,
        value_pair(&report.residue_bound)
    );
}
