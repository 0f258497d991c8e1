//! `heights`: local p-adic heights on hyperelliptic curves from JSON requests.

mod request;

use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use padic_heights::cohomology::{cache_key, WMode};
use padic_heights::coleman::coleman_integrals_on_basis;
use padic_heights::curve::{build_curve_rational, map_point, MapKind};
use padic_heights::heights::{compute_height, prepare_model, HeightOptions, HeightRequest};
use padic_heights::{Error, Result};
use serde_json::{json, Value};

use request::{Overrides, Request};

const CACHE_ENV: &str = "HEIGHTS_CACHE_DIR";

#[derive(Parser, Debug)]
#[command(name = "heights", version, about = "Local Coleman-Gross p-adic heights on hyperelliptic curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute and store the Frobenius and cup-product data for a curve.
    Precompute(Common),
    /// Evaluate h_p(D1, D2).
    Height {
        #[command(flatten)]
        common: Common,
        /// Recompute antisymmetric pieces on the model C'_P and compare (unit-root W only).
        #[arg(long)]
        verify: bool,
    },
    /// Coleman integrals of x^i dx/y from `from` to `to` on the normalised model.
    Integrate(Common),
}

#[derive(Args, Debug)]
struct Common {
    /// Request file, or `-` for standard input.
    request: PathBuf,
    /// Prime, overriding curve.p.
    #[arg(long)]
    p: Option<u64>,
    /// Target absolute precision N, overriding curve.prec.
    #[arg(long)]
    prec: Option<i64>,
    /// Complement of the holomorphic forms.
    #[arg(long = "w", value_parser = parse_mode)]
    w: Option<WMode>,
    /// Cache file or directory; defaults to $HEIGHTS_CACHE_DIR.
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Emit a JSON record instead of text.
    #[arg(long)]
    json: bool,
}

fn parse_mode(s: &str) -> std::result::Result<WMode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

impl Common {
    fn load(&self) -> Result<Request> {
        let text = if self.request.as_os_str() == "-" {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            s
        } else {
            fs::read_to_string(&self.request).map_err(|e| Error::Io(format!("{}: {}", self.request.display(), e)))?
        };
        Request::parse(&text, &Overrides { p: self.p, prec: self.prec, w_mode: self.w })
    }

    fn cache_location(&self) -> Result<Option<PathBuf>> {
        if let Some(c) = &self.cache {
            return Ok(Some(c.clone()));
        }
        match std::env::var_os(CACHE_ENV) {
            Some(dir) if !dir.is_empty() => {
                fs::create_dir_all(&dir)?;
                Ok(Some(PathBuf::from(dir)))
            }
            _ => Ok(None),
        }
    }
}

fn emit(json_mode: bool, record: Value, text: String) {
    if json_mode {
        println!("{}", serde_json::to_string_pretty(&record).expect("serialisable"));
    } else {
        print!("{}", text);
    }
}

fn precompute(c: &Common) -> Result<()> {
    let r = c.load()?;
    let loc = c
        .cache_location()?
        .ok_or_else(|| Error::Invalid(format!("no cache location: pass --cache or set {}", CACHE_ENV)))?;
    let user = build_curve_rational(r.p, &r.f, r.prec + 10)?;
    let (d, _) = prepare_model(&user, r.base_point.as_ref(), r.prec, r.w_mode, Some(&loc))?;
    let key = cache_key(&d.curve, d.target, d.w_mode);
    let path = if loc.is_dir() { loc.join(format!("{}.json", key)) } else { loc };
    let record = json!({
        "cache": path.display().to_string(),
        "key": key,
        "N": d.target,
        "n_work": d.n_work,
        "w_mode": d.w_mode.as_str(),
        "m": d.m, "m1": d.m1, "m2": d.m2,
    });
    let text = format!(
        "cache: {}\nN: {}, working precision: {}\nw_mode: {}\nm, m', m'': {}, {}, {}\n",
        path.display(),
        d.target,
        d.n_work,
        d.w_mode,
        d.m,
        d.m1,
        d.m2
    );
    emit(c.json, record, text);
    Ok(())
}

fn height(c: &Common, verify: bool) -> Result<()> {
    let r = c.load()?;
    if r.d1.is_empty() || r.d2.is_empty() {
        return Err(Error::Invalid("height needs divisors \"D1\" and \"D2\"".into()));
    }
    let req = HeightRequest {
        p: r.p,
        f: r.f,
        prec: r.prec,
        w_mode: r.w_mode,
        d1: r.d1,
        d2: r.d2,
        base_point: r.base_point,
        options: HeightOptions { verify },
        cache: c.cache_location()?,
    };
    let h = compute_height(&req)?;
    let trace: Vec<&str> = h.trace.iter().map(|b| b.as_str()).collect();
    let record = json!({
        "value": h.value.to_json(),
        "canonical": h.value.to_canonical_string(),
        "precision": h.precision,
        "trace": trace,
        "w_mode": h.w_mode.as_str(),
        "verified": verify,
    });
    let text = format!(
        "{}\nprecision: {}\ntrace: {}\nw_mode: {}\n",
        h.value.to_canonical_string(),
        h.precision,
        trace.join(", "),
        h.w_mode
    );
    emit(c.json, record, text);
    Ok(())
}

fn integrate(c: &Common) -> Result<()> {
    let r = c.load()?;
    let (from, to) = match (&r.from, &r.to) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::Invalid("integrate needs \"from\" and \"to\" points".into())),
    };
    let user = build_curve_rational(r.p, &r.f, r.prec + 10)?;
    let (d, map) = prepare_model(&user, r.base_point.as_ref(), r.prec, r.w_mode, c.cache_location()?.as_deref())?;
    let n = map.source.precision();
    let s = map_point(&map, &from.realize(&map.source, n)?)?;
    let t = map_point(&map, &to.realize(&map.source, n)?)?;
    let ints = coleman_integrals_on_basis(&d, &s, &t)?;
    let vals: Vec<_> = ints.values.iter().map(|v| v.with_precision(r.prec)).collect();
    let identity = matches!(map.kind, MapKind::Identity);
    let record = json!({
        "model": d.curve.descriptor(),
        "normalised": !identity,
        "from": s.label(),
        "to": t.label(),
        "integrals": vals.iter().map(|v| v.to_canonical_string()).collect::<Vec<_>>(),
    });
    let mut text = String::new();
    if !identity {
        text.push_str(&format!("model: {}\n", d.curve.descriptor()));
    }
    for (i, v) in vals.iter().enumerate() {
        text.push_str(&format!("int x^{} dx/y = {}\n", i, v));
    }
    emit(c.json, record, text);
    Ok(())
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Precompute(c) => precompute(c),
        Command::Height { common, verify } => height(common, *verify),
        Command::Integrate(c) => integrate(c),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
