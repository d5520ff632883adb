//! `arzeta`: point counts and zeta functions of torus hypersurfaces and
//! affine schemes, driven by JSON job files.

mod job;
mod selftest;

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::{BigInt, BigUint};
use serde_json::{json, Value};

use arzeta::ms::Engine;
use arzeta::oracle::{affine_count, brute_count, DEFAULT_BUDGET};
use arzeta::poly::{terms_to_json, Term};
use arzeta::primes::primes_below;
use arzeta::scheme::{decompose, local_zeta_affine, signed_count};
use arzeta::trace::{point_count_exact, point_count_mod};
use arzeta::zeta::{zeta_all_primes, zeta_from_counts_pipeline, ZetaOptions};
use arzeta::IntegerRing;

use job::{CliError, CliResult, EngineChoice, Job};

#[derive(Parser, Debug)]
#[command(name = "arzeta", version, about = "Zeta functions of torus hypersurfaces over finite fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// |X(F_{q^r})|, exactly or mod p^λ when --lambda is given
    Count(JobArgs),
    /// Z(T) at the job's prime
    Zeta(JobArgs),
    /// Z(T) at every prime p < N with p ∤ d, one JSON record per line
    ZetaAll(JobArgs),
    /// Split an affine scheme into signed torus hypersurfaces
    Decompose(JobArgs),
    /// Brute-force point count by enumeration
    Oracle(JobArgs),
    /// Cross-check the engines on a small grid of random polynomials
    Selftest {
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Args, Debug)]
struct JobArgs {
    /// Job file; stdin when absent or "-"
    job: Option<PathBuf>,
    #[arg(long)]
    engine: Option<String>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long = "N")]
    n_bound: Option<u64>,
    #[arg(long)]
    lambda: Option<u32>,
    #[arg(long = "D")]
    d_bound: Option<usize>,
    /// Enumeration budget for `oracle`, in tuples
    #[arg(long)]
    budget: Option<u128>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl JobArgs {
    fn load(&self) -> CliResult<Job> {
        let text = match &self.job {
            Some(path) if path.as_os_str() != "-" => fs::read_to_string(path)?,
            _ => {
                let mut s = String::new();
                io::stdin().read_to_string(&mut s)?;
                s
            }
        };
        let mut job = Job::from_json(&text)?;
        if let Some(e) = &self.engine {
            job.engine = Some(e.parse()?);
        }
        job.r = self.r.or(job.r);
        job.n_bound = self.n_bound.or(job.n_bound);
        job.lambda = self.lambda.or(job.lambda);
        job.d_bound = self.d_bound.or(job.d_bound);
        Ok(job)
    }
}

fn single_engine(job: &Job) -> CliResult<Engine> {
    match job.engine.unwrap_or(EngineChoice::Single(Engine::Linear)) {
        EngineChoice::Single(e) => Ok(e),
        EngineChoice::Art => Err(CliError::invalid("engine art runs only under zeta-all")),
    }
}

fn zeta_options(job: &Job, engine: Engine) -> ZetaOptions {
    ZetaOptions {
        engine,
        lambda: job.lambda,
        d_bound: job.d_bound,
    }
}

fn int_json(x: impl Into<BigInt>) -> Value {
    serde_json::from_str(&x.into().to_string()).expect("integers are valid JSON numbers")
}

fn run_count(job: &Job) -> CliResult<Vec<Value>> {
    let engine = single_engine(job)?;
    let r = job.require_r()?;
    Ok(vec![match job.lambda {
        Some(lambda) => {
            let ctx = job.ctx(lambda)?;
            let c = point_count_mod(&ctx, &job.poly(&ctx)?, r, engine)?;
            json!({"count": int_json(c), "lambda": lambda})
        }
        None => {
            let ctx = job.ctx(1)?;
            json!({"count": int_json(point_count_exact(&ctx, &job.poly(&ctx)?, r, engine)?)})
        }
    }])
}

fn run_zeta(job: &Job) -> CliResult<Vec<Value>> {
    let engine = single_engine(job)?;
    let ctx = job.ctx(1)?;
    let z = zeta_from_counts_pipeline(&ctx, &job.poly(&ctx)?, &zeta_options(job, engine))?;
    Ok(vec![z.to_json()])
}

fn record(p: u64, res: arzeta::Result<arzeta::zeta::ZetaRational>) -> Value {
    let mut v = match res {
        Ok(z) => z.to_json(),
        Err(e) => CliError::from(e).to_json(),
    };
    v["p"] = json!(p);
    v
}

fn run_zeta_all(job: &Job) -> CliResult<Vec<Value>> {
    if job.a != 1 {
        return Err(CliError::invalid("zeta-all works over prime fields (a = 1)"));
    }
    let n_bound = job.n_bound.ok_or_else(|| CliError::invalid("give N in the job or with --N"))?;
    let f = job.int_poly()?;
    match job.engine.unwrap_or(EngineChoice::Art) {
        EngineChoice::Art => {
            let opts = zeta_options(job, Engine::Linear);
            Ok(zeta_all_primes(&f, n_bound, &opts)?
                .into_iter()
                .map(|(p, z)| record(p, z))
                .collect())
        }
        EngineChoice::Single(engine) => {
            let opts = zeta_options(job, engine);
            opts.resolve(f.n(), f.degree(), 1)?;
            Ok(primes_below(n_bound)
                .into_iter()
                .filter(|&p| f.degree() as u64 % p != 0)
                .map(|p| {
                    let z = arzeta::RingCtx::prime_field(p, 1)
                        .and_then(|ctx| zeta_from_counts_pipeline(&ctx, &f.to_ring(&ctx), &opts));
                    record(p, z)
                })
                .collect())
        }
    }
}

fn run_decompose(job: &Job) -> CliResult<Vec<Value>> {
    let gens = job.scheme()?;
    let pieces = decompose(&gens)?;
    let listed: Vec<Value> = pieces
        .iter()
        .map(|piece| {
            let terms: Vec<Term> = piece
                .f
                .terms(&IntegerRing)
                .into_iter()
                .map(|(exp, c)| Term { exp, c: vec![c] })
                .collect();
            json!({"n": piece.n, "d": piece.d, "e": piece.e, "F": terms_to_json(&terms)})
        })
        .collect();
    let mut out = json!({"pieces": listed});
    if let Some(p) = job.p {
        let engine = single_engine(job)?;
        match job.r {
            Some(_) => {
                out["count"] = int_json(signed_count(&pieces, p, job.require_r()?, engine)?);
            }
            None => {
                out["zeta"] = local_zeta_affine(&gens, p, &zeta_options(job, engine))?.to_json();
            }
        }
    }
    Ok(vec![out])
}

fn run_oracle(job: &Job, budget: u128) -> CliResult<Vec<Value>> {
    let r = job.require_r()?;
    let count = if job.generators.is_some() {
        affine_count(job.require_p()?, r, &job.scheme()?, budget)?
    } else {
        let ctx = job.ctx(1)?;
        brute_count(&ctx, &job.poly(&ctx)?, r, budget)?
    };
    Ok(vec![json!({"count": int_json(BigUint::from(count))})])
}

fn emit(records: &[Value], out: Option<&PathBuf>) -> CliResult<()> {
    let mut text = String::new();
    for r in records {
        text.push_str(&serde_json::to_string(r)?);
        text.push('\n');
    }
    match out {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    let (records, out) = match &cli.command {
        Command::Selftest { out, seed } => {
            let report = selftest::run(*seed)?;
            let ok = report["mismatches"] == json!(0);
            emit(&[json!({ "selftest": report })], out.as_ref())?;
            if !ok {
                return Err(CliError::new("selftest", "engines disagree; see the report"));
            }
            return Ok(());
        }
        Command::Count(args) => (run_count(&args.load()?)?, &args.out),
        Command::Zeta(args) => (run_zeta(&args.load()?)?, &args.out),
        Command::ZetaAll(args) => (run_zeta_all(&args.load()?)?, &args.out),
        Command::Decompose(args) => (run_decompose(&args.load()?)?, &args.out),
        Command::Oracle(args) => (run_oracle(&args.load()?, args.budget.unwrap_or(DEFAULT_BUDGET))?, &args.out),
    };
    emit(&records, out.as_ref())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = CliError::new("usage", e.to_string().trim().to_string());
            println!("{}", err.to_json());
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            println!("{}", e.to_json());
            ExitCode::FAILURE
        }
    }
}
