use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::Args;
use g2rank_core::algebra::field::parse_rational;
use g2rank_core::certify::{self, certify_alpha, certify_alpha_default, certify_pair, default_primes, RankCertificate};
use g2rank_core::experiments::{self, SamplingPlan};
use g2rank_core::families::{self, split};
use g2rank_core::jacobian::JacobianGroup;
use g2rank_core::models::ModelKey;
use g2rank_core::{regev, BoxKind, BoxSpec, Error, Rational, WeierstrassModel};
use num_bigint::BigInt;
use serde::Serialize;

use crate::config::RunConfig;
use crate::failure::{CliError, CliResult};
use crate::scan::{run_scan, ScanJob};

pub struct Context {
    pub cfg: RunConfig,
    pub resume: bool,
    pub h_mask: Option<u8>,
}

impl Context {
    fn writer(&self) -> CliResult<Box<dyn Write>> {
        Ok(match &self.cfg.out {
            Some(path) => Box::new(BufWriter::new(File::create(path).map_err(|e| CliError::io(path, e))?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        })
    }

    fn box_spec(&self) -> CliResult<BoxSpec> {
        let b = self
            .cfg
            .box_spec
            .as_ref()
            .ok_or_else(|| CliError::Input("--box and --x are required".into()))?;
        let kind = BoxKind::parse(&b.kind)?;
        let spec = match b.h_mask {
            Some(m) if m < 16 => BoxSpec::with_options(kind, b.x, b.y, 1 << m)?,
            Some(m) => return Err(CliError::Input(format!("h mask {m} is not a 4-bit value"))),
            None => BoxSpec::with_options(kind, b.x, b.y, g2rank_core::models::ALL_H)?,
        };
        Ok(spec)
    }

    fn primes(&self) -> Option<&[u64]> {
        (!self.cfg.primes.is_empty()).then_some(self.cfg.primes.as_slice())
    }

    fn scan_job<'a>(&self, name: &'a str, limit: Option<u64>) -> CliResult<ScanJob<'a>> {
        let out = self
            .cfg
            .out
            .clone()
            .ok_or_else(|| CliError::Input("box scans need --out for their checkpoint".into()))?;
        Ok(ScanJob {
            name,
            spec: self.box_spec()?,
            checkpoint: self.cfg.checkpoint.clone().unwrap_or_else(|| crate::scan::default_checkpoint(&out)),
            out,
            resume: self.resume,
            limit,
        })
    }

    fn check_coefficients(&self, m: &WeierstrassModel) -> CliResult<()> {
        let limit = self.cfg.guards.max_coeff_bits;
        if m.f.iter().any(|a| a.bits() > limit) {
            return Err(CliError::Input(format!("coefficient exceeds the {limit}-bit guard")));
        }
        Ok(())
    }
}

fn emit<T: Serialize>(out: &mut dyn Write, value: &T) -> CliResult<()> {
    writeln!(out, "{}", serde_json::to_string(value).expect("record serializes"))?;
    Ok(())
}

fn parse_rationals(list: &[String]) -> CliResult<Vec<Rational>> {
    list.iter().map(|s| parse_rational(s).map_err(CliError::from)).collect()
}

fn three(list: &[String], what: &str) -> CliResult<[Rational; 3]> {
    let v = parse_rationals(list)?;
    v.try_into().map_err(|_| CliError::Input(format!("{what} needs exactly three values")))
}

/// A named curve or a JSON file holding a model.
pub fn load_curve(spec: &str) -> CliResult<WeierstrassModel> {
    match spec {
        "tengely" => Ok(WeierstrassModel::from_i64(&[28, 72, 120, 120, 75, 18, 1])),
        "15625" => Ok(WeierstrassModel::from_i64(&[1, 2, 5, 10, 10, 8, 1])),
        "440509" => Ok(regev::rank_four_curve()),
        path => {
            let path = Path::new(path);
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            let model: WeierstrassModel = serde_json::from_str(text.trim())
                .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            Ok(model)
        }
    }
}

#[derive(Serialize)]
struct ModelLine<'a> {
    key: &'a ModelKey,
    model: &'a WeierstrassModel,
}

#[derive(Args, Debug)]
pub struct EnumerateArgs {
    /// Stop after this many models; resume later with `--resume`.
    #[arg(long)]
    limit: Option<u64>,
}

pub fn enumerate(ctx: &Context, args: EnumerateArgs) -> CliResult<()> {
    if ctx.cfg.out.is_none() {
        let spec = ctx.box_spec()?;
        let mut out = ctx.writer()?;
        for (key, model) in spec.enumerate().take(args.limit.unwrap_or(u64::MAX) as usize) {
            emit(&mut *out, &ModelLine { key: &key, model: &model })?;
        }
        out.flush()?;
        return Ok(());
    }
    let job = ctx.scan_job("enumerate", args.limit)?;
    let ckpt = run_scan(&job, |key, model| {
        Some(serde_json::to_string(&ModelLine { key, model }).expect("record serializes"))
    })?;
    eprintln!("enumerate: {} models written, done = {}", ckpt.emitted, ckpt.done);
    Ok(())
}

#[derive(Args, Debug)]
pub struct CertifyArgs {
    /// Curve JSON file, or one of tengely, 15625, 440509.
    #[arg(long)]
    curve: Option<String>,
    /// Certify the pair (alpha, beta) up to `--bound`.
    #[arg(long)]
    pair: bool,
    #[arg(long, default_value_t = 20)]
    bound: u64,
    /// With `--box`: stop after this many models.
    #[arg(long)]
    limit: Option<u64>,
}

pub fn certify(ctx: &Context, args: CertifyArgs) -> CliResult<()> {
    let Some(curve) = &args.curve else {
        return certify_box(ctx, args.limit);
    };
    let model = load_curve(curve)?;
    ctx.check_coefficients(&model)?;
    let result = if args.pair {
        let primes = ctx.primes().map(<[u64]>::to_vec).unwrap_or_else(|| default_primes(&model));
        certify_pair(&model, args.bound, &primes)
    } else {
        match ctx.primes() {
            Some(p) => certify_alpha(&model, p),
            None => certify_alpha_default(&model),
        }
    };
    let mut out = ctx.writer()?;
    match result {
        Ok(cert) => {
            writeln!(out, "{}", cert.to_ndjson_line())?;
            out.flush()?;
            Ok(())
        }
        Err(Error::Undecided(partial)) => {
            writeln!(out, "{partial}")?;
            out.flush()?;
            Err(Error::Undecided("no certificate; partial evidence written".into()).into())
        }
        Err(e) => Err(e.into()),
    }
}

fn certify_box(ctx: &Context, limit: Option<u64>) -> CliResult<()> {
    let job = ctx.scan_job("certify", limit)?;
    let primes = ctx.primes().map(<[u64]>::to_vec);
    let ckpt = run_scan(&job, |_, model| {
        let cert = match &primes {
            Some(p) => certify_alpha(model, p),
            None => certify_alpha_default(model),
        };
        cert.ok().map(|c| c.to_ndjson_line())
    })?;
    eprintln!(
        "certify: {} of {} models certified, done = {}",
        ckpt.emitted, ckpt.examined, ckpt.done
    );
    Ok(())
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// NDJSON produced by another subcommand.
    #[arg(long = "in")]
    input: PathBuf,
}

#[derive(Default, Debug)]
struct VerifyTally {
    certificates: u64,
    models: u64,
    other: u64,
}

fn verify_line(line: &str, tally: &mut VerifyTally) -> CliResult<()> {
    let value: serde_json::Value =
        serde_json::from_str(line).map_err(|e| CliError::Input(format!("not JSON: {e}")))?;
    if value.get("kind").is_some() && value.get("curve").is_some() {
        let cert = RankCertificate::from_ndjson_line(line)?;
        certify::verify_certificate(&cert)?;
        tally.certificates += 1;
    } else if let (Some(key), Some(model)) = (value.get("key"), value.get("model")) {
        let key: ModelKey = serde_json::from_value(key.clone()).map_err(|e| CliError::Input(e.to_string()))?;
        let model: WeierstrassModel =
            serde_json::from_value(model.clone()).map_err(|e| CliError::Input(e.to_string()))?;
        if key.model() != model || !model.is_valid() {
            return Err(Error::Invariant(format!("model record {key:?} is inconsistent or invalid")).into());
        }
        tally.models += 1;
    } else {
        tally.other += 1;
    }
    Ok(())
}

pub fn verify(_ctx: &Context, args: VerifyArgs) -> CliResult<()> {
    let file = File::open(&args.input).map_err(|e| CliError::io(&args.input, e))?;
    let mut tally = VerifyTally::default();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        verify_line(&line, &mut tally).map_err(|e| match e {
            CliError::Core(err) if err.is_invariant_violation() => {
                CliError::Core(Error::Invariant(format!("line {}: {err}", i + 1)))
            }
            other => CliError::Input(format!("line {}: {other}", i + 1)),
        })?;
    }
    eprintln!(
        "verify: {} certificates, {} models, {} other records, all sound",
        tally.certificates, tally.models, tally.other
    );
    Ok(())
}

#[derive(Args, Debug)]
pub struct SplitFamilyArgs {
    /// Good primes checked per member.
    #[arg(long, default_value_t = 5)]
    checks: usize,
}

#[derive(Serialize)]
struct SplitLine<'a> {
    member: &'a split::SplitFamilyMember,
    primes: Vec<u64>,
    verified: bool,
}

pub fn split_family(ctx: &Context, args: SplitFamilyArgs) -> CliResult<()> {
    let x = ctx
        .cfg
        .box_spec
        .as_ref()
        .map(|b| b.x)
        .ok_or_else(|| CliError::Input("--x is required".into()))?;
    let members = families::split_family(x)?;
    let mut out = ctx.writer()?;
    let mut failed = 0;
    for m in &members {
        let primes = split::good_split_primes(m, args.checks);
        let verified = families::verify_split(m, &primes)?;
        failed += u64::from(!verified);
        emit(&mut *out, &SplitLine { member: m, primes, verified })?;
    }
    out.flush()?;
    eprintln!(
        "split-family: {} members, prediction {:.2}",
        members.len(),
        experiments::split_prediction(x as f64)
    );
    if failed > 0 {
        return Err(Error::Invariant(format!("{failed} members fail the split point count")).into());
    }
    Ok(())
}

#[derive(Args, Debug)]
pub struct GlueArgs {
    /// Roots of the first cubic, comma-separated rationals.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    roots_f: Vec<String>,
    /// Roots of the second cubic.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    roots_g: Vec<String>,
    /// Twist parameters for the rank-doubling check of the first cubic with itself.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    twists: Vec<String>,
}

pub fn glue(ctx: &Context, args: GlueArgs) -> CliResult<()> {
    let roots_f = three(&args.roots_f, "--roots-f")?;
    let mut out = ctx.writer()?;
    if !args.twists.is_empty() {
        let d_list = parse_rationals(&args.twists)?;
        let primes = ctx.primes().map(<[u64]>::to_vec).unwrap_or_else(|| vec![7, 11, 13, 17, 19]);
        for row in families::rank_doubling_check(&roots_f, &d_list, &primes)? {
            emit(&mut *out, &row)?;
        }
        out.flush()?;
        return Ok(());
    }
    let roots_g = three(&args.roots_g, "--roots-g")?;
    let spec = families::glue(&roots_f, &roots_g)?;
    emit(&mut *out, &spec)?;
    if let Some(primes) = ctx.primes() {
        for row in families::split_count_check(&spec.sextic, &spec.f(), &spec.g(), primes)? {
            emit(&mut *out, &row)?;
        }
    }
    out.flush()?;
    Ok(())
}

#[derive(Args, Debug)]
pub struct TwistArgs {
    #[arg(long, allow_hyphen_values = true)]
    l1: String,
    #[arg(long, allow_hyphen_values = true)]
    l2: String,
    #[arg(long, allow_hyphen_values = true)]
    u: String,
    /// Height bound for the witness point search.
    #[arg(long, default_value_t = 200)]
    search: u64,
}

pub fn twist(ctx: &Context, args: TwistArgs) -> CliResult<()> {
    let [l1, l2, u] = three(&[args.l1, args.l2, args.u], "twist")?;
    let witness = families::twist_witness(&l1, &l2, &u, args.search)?;
    let mut out = ctx.writer()?;
    emit(&mut *out, &witness)?;
    out.flush()?;
    Ok(())
}

#[derive(Args, Debug)]
pub struct DensityArgs {
    /// Comma-separated box kinds; defaults to `--box`.
    #[arg(long, value_delimiter = ',')]
    kinds: Vec<String>,
    #[arg(long, value_delimiter = ',', required = true)]
    grid: Vec<u64>,
    /// `exhaustive` or `uniform:N`; chosen per box size when absent.
    #[arg(long)]
    plan: Option<String>,
    /// Tally torsion of alpha over the square-leading box instead of counting.
    #[arg(long)]
    torsion: bool,
}

pub fn density(ctx: &Context, args: DensityArgs) -> CliResult<()> {
    let plan = match &args.plan {
        Some(p) => SamplingPlan::parse(p, ctx.cfg.seed)?,
        None => SamplingPlan::uniform(experiments::DEFAULT_SAMPLE, ctx.cfg.seed),
    };
    let reports = if args.torsion {
        vec![experiments::torsion_density_experiment(&args.grid, &plan, ctx.h_mask, ctx.primes())?]
    } else {
        let names: Vec<String> = if args.kinds.is_empty() {
            ctx.cfg.box_spec.iter().map(|b| b.kind.clone()).collect()
        } else {
            args.kinds.clone()
        };
        if names.is_empty() {
            return Err(CliError::Input("--kinds or --box is required".into()));
        }
        let kinds = names.iter().map(|k| BoxKind::parse(k)).collect::<Result<Vec<_>, _>>()?;
        experiments::box_count_experiment(&kinds, &args.grid, &plan, ctx.h_mask)?
    };
    let csv = ctx.cfg.out.as_ref().is_some_and(|p| p.extension().is_some_and(|e| e == "csv"));
    let mut out = ctx.writer()?;
    if csv {
        experiments::write_csv(&reports, &mut out)?;
    } else {
        for r in &reports {
            out.write_all(r.to_ndjson().as_bytes())?;
        }
    }
    out.flush()?;
    Ok(())
}

#[derive(Args, Debug)]
pub struct XaArgs {
    #[arg(long, default_value_t = 100_000)]
    amax: u64,
    /// Height bound for the point search; 0 skips it.
    #[arg(long, default_value_t = 100)]
    height: u64,
}

pub fn xa_experiment(ctx: &Context, args: XaArgs) -> CliResult<()> {
    let report = experiments::xa_family_experiment(args.amax, args.height)?;
    let mut out = ctx.writer()?;
    emit(&mut *out, &report)?;
    out.flush()?;
    Ok(())
}

#[derive(Args, Debug)]
pub struct RegevArgs {
    #[arg(long, default_value_t = 256)]
    n: u64,
    #[arg(long, value_delimiter = ',', default_values_t = [1u64, 2, 4, 8, 16, 32])]
    d_grid: Vec<u64>,
    #[arg(long, default_value_t = 101)]
    q: u64,
    /// Curve JSON file, or one of tengely, 15625, 440509.
    #[arg(long, default_value = "tengely")]
    curve: String,
}

pub fn regev_cost(ctx: &Context, args: RegevArgs) -> CliResult<()> {
    let model = load_curve(&args.curve)?;
    ctx.check_coefficients(&model)?;
    let g: Vec<BigInt> = model.simplified().g.to_vec();
    let group = JacobianGroup::from_integers(&g)?.reduce_mod(args.q)?;
    let rows = regev::cost_report(args.n, &args.d_grid, &group, ctx.cfg.seed)?;
    let out = ctx.writer()?;
    regev::write_cost_csv(&rows, out)?;
    Ok(())
}
