use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use quadnorm::cyclicext::period_polynomial;
use quadnorm::formclass::{polya_report_with, ClassGroup, Flavor};
use quadnorm::normtest::{norm_index, NormConstant};
use quadnorm::{make_field, BasisKind};
use quadnorm_harness::groups::{self, parse_subgroup};
use quadnorm_harness::scan::{self, ScanRecord};
use quadnorm_harness::stats::{first_by_disc, stats};
use quadnorm_harness::verify::{self, Report};
use quadnorm_harness::{HarnessError, Result, RunConfig, CONFIG_ENV};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "qnlab", version, about = "Real quadratic fields, cyclic extensions and transfer maps")]
struct Cli {
    /// Config file of key=value lines; flags override its values.
    #[arg(long, global = true, env = CONFIG_ENV)]
    config: Option<PathBuf>,
    /// Worker threads (0 = one per core).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Discriminant, integral basis and ramification of Q(√d).
    Field(DArg),
    /// Fundamental unit of Q(√d).
    Unit(DArg),
    /// Class group structure from reduced forms.
    Classgroup {
        #[arg(long)]
        d: i64,
        #[arg(long)]
        narrow: bool,
    },
    /// Period polynomial of the degree p^n subfield of conductor q.
    Ext {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        n: u32,
    },
    /// Local norm index of the fundamental unit at the primes above q.
    Normindex {
        #[arg(long)]
        d: i64,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        n: u32,
    },
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Searches for a conductor certifying p | h.
    Detect {
        #[arg(long)]
        d: i64,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        qmax: Option<u64>,
    },
    /// One record per squarefree d ≤ dmax.
    Scan {
        #[arg(long)]
        dmax: Option<u64>,
        /// Scan the first N real fundamental discriminants instead.
        #[arg(long, conflicts_with = "dmax")]
        first: Option<usize>,
        #[arg(long, num_args = 1..)]
        p: Vec<u64>,
        #[arg(long)]
        qmax: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write one CSV row per (record, p).
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Attach the Minkowski-bound class number for Δ ≤ 2000.
        #[arg(long)]
        oracle: bool,
    },
    /// Fraction of scanned fields with p | h.
    Stats {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, num_args = 1.., required = true)]
        p: Vec<u64>,
        /// Restrict to the first N records by discriminant.
        #[arg(long)]
        first: Option<usize>,
    },
    /// Restricted transfer and diagram check for a multiplication table.
    Transfer {
        #[arg(long, requires = "subgroup", required_unless_present = "survey")]
        table_file: Option<PathBuf>,
        /// Elements of H, comma separated.
        #[arg(long)]
        subgroup: Option<String>,
        /// Survey every abelian group up to this order instead.
        #[arg(long, conflicts_with = "table_file")]
        survey: Option<u64>,
    },
}

#[derive(Args)]
struct DArg {
    #[arg(long)]
    d: i64,
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Compares the class order with the norm index over proper conductors.
    Thm14 {
        #[arg(long)]
        d: i64,
        #[arg(long)]
        l: u64,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long)]
        qmax: Option<u64>,
    },
    /// The d = 79, q = 37 cubic example.
    Ex79,
    /// The conductor-7 cubic over Q(√79).
    Appendixa,
    /// Composition of the polynomials attached to the order-3 classes of Q(√79).
    Compose79 {
        #[arg(long)]
        bound: Option<u64>,
    },
}

#[derive(Serialize)]
struct FieldOut {
    d: i64,
    disc: i64,
    omega: &'static str,
    ramified_primes: Vec<u64>,
}

#[derive(Serialize)]
struct UnitOut {
    d: i64,
    unit: String,
    a: String,
    b: String,
    den: u8,
    norm: i8,
}

#[derive(Serialize)]
struct ClassGroupOut {
    d: i64,
    disc: i64,
    flavor: &'static str,
    h: u64,
    elementary_divisors: Vec<u64>,
    generators: Vec<String>,
    minus_one_principal: bool,
    polya_order: u64,
    h1_order: u64,
}

#[derive(Serialize)]
struct ExtOut {
    q: u64,
    p: u64,
    n: u32,
    degree: u64,
    generator: u64,
    period_poly: String,
    poly_discriminant: String,
    field_discriminant: String,
    power_basis_index: String,
}

#[derive(Serialize)]
struct VerdictOut {
    prime: String,
    residue_degree: u32,
    exponent: u64,
    is_norm: bool,
    local_order: u64,
}

#[derive(Serialize)]
struct NormIndexOut {
    d: i64,
    q: u64,
    p: u64,
    n: u32,
    verdicts: Vec<VerdictOut>,
    index: u64,
    ratio_p_part: u64,
    t: u32,
    c: &'static str,
    field_norm_caveat: bool,
}

fn emit<T: Serialize>(value: &T) -> Result<()> {
    let stdout = io::stdout();
    let mut w = stdout.lock();
    serde_json::to_writer(&mut w, value)?;
    w.write_all(b"\n")?;
    Ok(())
}

fn emit_report(report: &Report) -> Result<u8> {
    emit(report)?;
    Ok(u8::from(!report.pass))
}

fn load_config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    if let Some(w) = cli.workers {
        cfg.workers = w;
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<u8> {
    let mut cfg = load_config(&cli)?;
    if cfg.workers > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.workers)
            .build_global()
            .map_err(|e| HarnessError::InvalidConfig(e.to_string()))?;
    }
    match cli.command {
        Command::Field(DArg { d }) => {
            let f = make_field(d)?;
            emit(&FieldOut {
                d,
                disc: f.disc(),
                omega: match f.basis_kind() {
                    BasisKind::HalfIntegral => "(1+sqrt(d))/2",
                    BasisKind::Integral => "sqrt(d)",
                },
                ramified_primes: f.ramified_primes(),
            })?;
        }
        Command::Unit(DArg { d }) => {
            let eps = make_field(d)?.fundamental_unit();
            emit(&UnitOut {
                d,
                unit: eps.value.to_string(),
                a: eps.value.a().to_string(),
                b: eps.value.b().to_string(),
                den: eps.value.den(),
                norm: eps.unit_norm,
            })?;
        }
        Command::Classgroup { d, narrow } => {
            let f = make_field(d)?;
            let group = ClassGroup::new(&f);
            let flavor = if narrow { Flavor::Narrow } else { Flavor::Wide };
            let s = group.structure(flavor);
            let polya = polya_report_with(&f, &group);
            emit(&ClassGroupOut {
                d,
                disc: f.disc(),
                flavor: if narrow { "narrow" } else { "wide" },
                h: s.h,
                elementary_divisors: s.elementary_divisors,
                generators: s.generators.iter().map(|g| g.canonical.to_string()).collect(),
                minus_one_principal: group.minus_one_is_principal(),
                polya_order: polya.polya_order,
                h1_order: polya.h1_order,
            })?;
        }
        Command::Ext { q, p, n } => {
            let desc = period_polynomial(q, p, n)?;
            emit(&ExtOut {
                q,
                p,
                n,
                degree: desc.degree(),
                generator: desc.generator(),
                period_poly: desc.period_poly().to_string(),
                poly_discriminant: desc.poly_discriminant().to_string(),
                field_discriminant: desc.field_discriminant().to_string(),
                power_basis_index: desc.power_basis_index().to_string(),
            })?;
        }
        Command::Normindex { d, q, p, n } => {
            let f = make_field(d)?;
            let desc = period_polynomial(q, p, n)?;
            let rep = norm_index(&f, &desc)?;
            emit(&NormIndexOut {
                d,
                q,
                p,
                n,
                verdicts: rep
                    .verdicts
                    .iter()
                    .map(|v| VerdictOut {
                        prime: v.prime_above_q.to_string(),
                        residue_degree: v.residue_degree,
                        exponent: v.exponent_used,
                        is_norm: v.is_norm,
                        local_order: v.local_order,
                    })
                    .collect(),
                index: rep.index,
                ratio_p_part: rep.ratio_p_part,
                t: rep.t,
                c: match rep.c {
                    NormConstant::One => "1",
                    NormConstant::Undetermined => "1 or 2",
                },
                field_norm_caveat: rep.field_norm_caveat,
            })?;
        }
        Command::Verify(v) => {
            return match v {
                VerifyCommand::Thm14 { d, l, p, n, qmax } => {
                    let rep = verify::verify_thm14(d, l, p, n, qmax.unwrap_or(cfg.qmax))?;
                    emit(&rep)?;
                    Ok(u8::from(!rep.agreement))
                }
                VerifyCommand::Ex79 => emit_report(&verify::verify_example_79()),
                VerifyCommand::Appendixa => emit_report(&verify::reproduce_appendix_a()),
                VerifyCommand::Compose79 { bound } => {
                    emit_report(&verify::verify_composition_79(bound.unwrap_or(cfg.bound)))
                }
            };
        }
        Command::Detect { d, p, qmax } => {
            let rep = verify::detect(d, p, qmax.unwrap_or(cfg.qmax))?;
            emit(&rep)?;
            return Ok(u8::from(rep.soundness_violation));
        }
        Command::Scan {
            dmax,
            first,
            p,
            qmax,
            out,
            csv,
            oracle,
        } => {
            if let Some(v) = dmax {
                cfg.dmax = v;
            }
            if !p.is_empty() {
                cfg.primes = p;
            }
            if let Some(v) = qmax {
                cfg.qmax = v;
            }
            if out.is_some() {
                cfg.out = out;
            }
            cfg.oracle |= oracle;
            cfg.validate()?;
            let records = match first {
                Some(count) => scan::scan_ds(&scan::first_fundamental(count), &cfg)?,
                None => scan::scan(&cfg)?,
            };
            match &cfg.out {
                Some(path) => scan::write_jsonl(&records, BufWriter::new(File::create(path)?))?,
                None => scan::write_jsonl(&records, io::stdout().lock())?,
            }
            if let Some(path) = csv {
                scan::write_csv(&records, BufWriter::new(File::create(path)?))?;
            }
            let oracle_mismatch = records
                .iter()
                .any(|r: &ScanRecord| r.oracle_h.is_some_and(|h| h != r.h));
            return Ok(u8::from(oracle_mismatch));
        }
        Command::Stats { input, p, first } => {
            let mut records = scan::read_jsonl(&fs::read_to_string(input)?)?;
            if let Some(count) = first {
                records = first_by_disc(&records, count);
            }
            for p in p {
                emit(&stats(&records, p)?)?;
            }
        }
        Command::Transfer {
            table_file,
            subgroup,
            survey,
        } => {
            if let Some(max_order) = survey {
                let lines = groups::survey(max_order);
                for line in &lines {
                    emit(line)?;
                }
                let bad = lines.iter().any(|l| l.discrepancy || !l.diagram_commutes || !l.oracle_agrees);
                return Ok(u8::from(bad));
            }
            let (Some(path), Some(subgroup)) = (table_file, subgroup) else {
                return Err(HarnessError::InvalidConfig("--table-file and --subgroup are required".into()));
            };
            let text = fs::read_to_string(path)?;
            let rep = groups::transfer_from_text(&text, &parse_subgroup(&subgroup)?, cfg.group_cap)?;
            emit(&rep)?;
            return Ok(u8::from(!rep.passes()));
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("qnlab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
