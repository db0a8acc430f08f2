use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use polar_gfd::sim::{load_configs, plot_data, results_to_csv};
use polar_gfd::{
    classify, construct_code, cost_sc, cost_scl, encode, extract_message, latency_table,
    place_message, plan_stats, run_bler, ClassifyOptions, CrcSpec, FKernel, FastListDecoder,
    FastScDecoder, ListDecoder, PolarCode, ScDecoder,
};

#[derive(Parser)]
#[command(name = "polar-gfd", version, about = "Polar codes with generalized fast SC/SCL decoding")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a code for the AWGN channel and write its descriptor.
    Construct {
        /// Tree depth (N = 2^n).
        #[arg(short)]
        n: usize,
        /// Unfrozen bit-channels.
        #[arg(short = 'k')]
        k: usize,
        #[arg(long, default_value_t = 0.5)]
        sigma: f64,
        /// Output file (stdout when omitted).
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Encode bit vectors read from stdin, one frame per line.
    ///
    /// A line of K bits is placed on the information positions; a line of N
    /// bits is taken as u directly.
    Encode {
        #[arg(long)]
        code: PathBuf,
        /// Attach this CRC to K-bit messages first.
        #[arg(long, value_enum, default_value_t = Crc::None)]
        crc: Crc,
    },
    /// Decode LLR vectors read from stdin, one frame per line.
    Decode {
        #[arg(long)]
        code: PathBuf,
        #[arg(long, value_enum, default_value_t = Algo::Sc)]
        algo: Algo,
        #[arg(long, default_value_t = 4)]
        list: usize,
        #[arg(long, value_enum, default_value_t = Crc::None)]
        crc: Crc,
        #[command(flatten)]
        nodes: NodeArgs,
        /// Use the min-sum approximation of f.
        #[arg(long)]
        min_sum: bool,
        /// Print only the information bits instead of the whole u.
        #[arg(long)]
        message: bool,
    },
    /// Print the decode plan of a code.
    Classify {
        #[arg(long)]
        code: PathBuf,
        #[command(flatten)]
        nodes: NodeArgs,
        #[arg(long)]
        json: bool,
    },
    /// Count decoding time steps.
    Latency {
        #[arg(long)]
        code: PathBuf,
        #[command(flatten)]
        nodes: NodeArgs,
        /// Emit the whole node-set progression for these AF budgets.
        #[arg(long, value_delimiter = ',', num_args = 0.., default_missing_value = "1,2,3")]
        sweep: Option<Vec<usize>>,
        #[arg(long)]
        csv: bool,
    },
    /// Run BLER simulations described by a JSON config.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// CSV output (stdout when omitted).
        #[arg(long, short)]
        out: Option<PathBuf>,
        /// Also write per-series plot data as JSON.
        #[arg(long)]
        emit_plotdata: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algo {
    Sc,
    Fastssc,
    Scl,
    Ssclspc,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Crc {
    None,
    Crc8,
    Crc16,
}

impl Crc {
    fn spec(self) -> Option<CrcSpec> {
        match self {
            Crc::None => None,
            Crc::Crc8 => Some(CrcSpec::CRC8),
            Crc::Crc16 => Some(CrcSpec::CRC16),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Nodes {
    Base,
    Grep,
    Gpc,
    Rgpc,
}

#[derive(clap::Args)]
struct NodeArgs {
    #[arg(long, value_enum, default_value_t = Nodes::Base)]
    nodes: Nodes,
    /// AF budget for RG-PC nodes.
    #[arg(long, default_value_t = 1)]
    max_af: usize,
    #[arg(long, default_value_t = 2)]
    min_size: usize,
}

impl NodeArgs {
    fn options(&self) -> Result<ClassifyOptions> {
        let (enable_grep, enable_gpc, max_af) = match self.nodes {
            Nodes::Base => (false, false, 0),
            Nodes::Grep => (true, false, 0),
            Nodes::Gpc => (true, true, 0),
            Nodes::Rgpc => {
                if self.max_af == 0 {
                    bail!("--nodes rgpc needs --max-af of at least 1");
                }
                (true, true, self.max_af)
            }
        };
        Ok(ClassifyOptions {
            enable_grep,
            enable_gpc,
            max_af,
            min_special_size: self.min_size,
        })
    }
}

fn read_stdin() -> Result<String> {
    let mut s = String::new();
    io::stdin().read_to_string(&mut s)?;
    Ok(s)
}

fn parse_lines<T: std::str::FromStr>(text: &str) -> Result<Vec<Vec<T>>>
where
    T::Err: std::error::Error + Send + Sync + 'static,
{
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        .map(|(i, l)| {
            l.split_whitespace()
                .map(|t| t.parse::<T>().with_context(|| format!("line {}: bad value {t:?}", i + 1)))
                .collect()
        })
        .collect()
}

fn bits_line(bits: &[u8]) -> String {
    bits.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(" ")
}

fn load_code(path: &PathBuf) -> Result<PolarCode> {
    PolarCode::load(path).with_context(|| format!("reading code {}", path.display()))
}

fn cmd_encode(code: &PathBuf, crc: Crc) -> Result<()> {
    let code = load_code(code)?;
    let mut out = io::stdout().lock();
    for (i, line) in parse_lines::<u8>(&read_stdin()?)?.into_iter().enumerate() {
        let width = crc.spec().map_or(0, |c| c.width());
        let u = if line.len() + width == code.k() {
            let msg = match crc.spec() {
                Some(c) => c.attach(&line),
                None => line,
            };
            place_message(&msg, &code)?
        } else if line.len() == code.len() && crc == Crc::None {
            line
        } else {
            bail!(
                "frame {}: expected {} message bits or {} bits of u, got {}",
                i + 1,
                code.k() - width,
                code.len(),
                line.len()
            );
        };
        writeln!(out, "{}", bits_line(&encode(&u, &code)?))?;
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_decode(
    code: &PathBuf,
    algo: Algo,
    list: usize,
    crc: Crc,
    nodes: &NodeArgs,
    min_sum: bool,
    message: bool,
) -> Result<()> {
    let code = load_code(code)?;
    let kernel = if min_sum { FKernel::MinSum } else { FKernel::Exact };
    if list == 0 {
        bail!("--list must be at least 1");
    }
    if crc.spec().map_or(0, |c| c.width()) > code.k() {
        bail!("CRC does not fit in {} unfrozen bits", code.k());
    }
    let opts = nodes.options()?;
    let mut sc = ScDecoder::<f64>::new(&code, kernel);
    let mut fast = FastScDecoder::<f64>::new(&code, classify(&code, &opts), kernel);
    let scl = ListDecoder::<f64>::new(&code, list, crc.spec(), kernel);
    let fast_scl = FastListDecoder::<f64>::new(&code, classify(&code, &opts), list, crc.spec(), kernel);
    let mut out = io::stdout().lock();
    for (i, llrs) in parse_lines::<f64>(&read_stdin()?)?.into_iter().enumerate() {
        if llrs.len() != code.len() {
            bail!("frame {}: expected {} LLRs, got {}", i + 1, code.len(), llrs.len());
        }
        if llrs.iter().any(|v| v.is_nan()) {
            bail!("frame {}: NaN LLR", i + 1);
        }
        let u_hat = match algo {
            Algo::Sc => sc.decode_in_place(&llrs).to_vec(),
            Algo::Fastssc => fast.decode_in_place(&llrs).to_vec(),
            Algo::Scl => scl.decode(&llrs).u_hat,
            Algo::Ssclspc => fast_scl.decode(&llrs).u_hat,
        };
        let shown = if message {
            let mut m = extract_message(&u_hat, &code);
            m.truncate(m.len() - crc.spec().map_or(0, |c| c.width()));
            m
        } else {
            u_hat
        };
        writeln!(out, "{}", bits_line(&shown))?;
    }
    Ok(())
}

fn cmd_latency(code: &PathBuf, nodes: &NodeArgs, sweep: Option<Vec<usize>>, csv: bool) -> Result<()> {
    let code = load_code(code)?;
    let text = match sweep {
        Some(af) => {
            let af = if af.is_empty() { vec![1, 2, 3] } else { af };
            let table = latency_table(&code, &af);
            if csv {
                table.to_csv()
            } else {
                table.to_string()
            }
        }
        None => {
            let plan = classify(&code, &nodes.options()?);
            let (sc, scl) = (cost_sc(&plan), cost_scl(&plan));
            if csv {
                format!("decoder,steps\nsc,{}\nscl,{}\n", sc.total_steps, scl.total_steps)
            } else {
                let mut s = format!("{:<8} {:>4} {:>8} {:>8} {:>8}\n", "node", "t", "offset", "sc", "scl");
                for (a, b) in sc.per_node.iter().zip(&scl.per_node) {
                    s.push_str(&format!(
                        "{:<8} {:>4} {:>8} {:>8} {:>8}\n",
                        a.label.as_str(),
                        a.stage,
                        a.offset,
                        a.steps,
                        b.steps
                    ));
                }
                s.push_str(&format!(
                    "{:<8} {:>4} {:>8} {:>8} {:>8}\n",
                    "total", "", "", sc.total_steps, scl.total_steps
                ));
                s
            }
        }
    };
    io::stdout().write_all(text.as_bytes())?;
    Ok(())
}

fn cmd_simulate(config: &PathBuf, out: Option<PathBuf>, plot: Option<PathBuf>) -> Result<()> {
    let configs = load_configs(config).with_context(|| format!("reading {}", config.display()))?;
    let mut results = Vec::with_capacity(configs.len());
    for cfg in &configs {
        eprintln!("simulating {}", cfg.display_label());
        results.push(run_bler(cfg)?);
    }
    let csv = results_to_csv(&results);
    match out {
        Some(path) => fs::write(&path, csv).with_context(|| format!("writing {}", path.display()))?,
        None => io::stdout().write_all(csv.as_bytes())?,
    }
    if let Some(path) = plot {
        let text = serde_json::to_string_pretty(&plot_data(&results))?;
        fs::write(&path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Construct { n, k, sigma, out } => {
            let code = construct_code(n, k, sigma)?;
            match out {
                Some(path) => code.save(&path)?,
                None => println!("{}", serde_json::to_string_pretty(&code.to_descriptor())?),
            }
        }
        Command::Encode { code, crc } => cmd_encode(&code, crc)?,
        Command::Decode {
            code,
            algo,
            list,
            crc,
            nodes,
            min_sum,
            message,
        } => cmd_decode(&code, algo, list, crc, &nodes, min_sum, message)?,
        Command::Classify { code, nodes, json } => {
            let code = load_code(&code)?;
            let plan = classify(&code, &nodes.options()?);
            if json {
                println!("{}", serde_json::to_string_pretty(&plan)?);
            } else {
                print!("{plan}");
                let stats = plan_stats(&plan);
                let counts: Vec<String> =
                    stats.counts.iter().map(|(l, c)| format!("{l}:{c}")).collect();
                println!("# {}", counts.join(" "));
            }
        }
        Command::Latency {
            code,
            nodes,
            sweep,
            csv,
        } => cmd_latency(&code, &nodes, sweep, csv)?,
        Command::Simulate {
            config,
            out,
            emit_plotdata,
        } => cmd_simulate(&config, out, emit_plotdata)?,
    }
    Ok(())
}
