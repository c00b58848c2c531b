//! `ulrich`: command-line front end.
//!
//! Exit codes: 0 success, 1 negative verdict or failed check, 2 bad input or
//! unsupported request, 3 engine limit (truncation cap or search-space cap).

use std::fs;
use std::io::Write;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use ulrich_core::catalog::{
    decomposables, exhaustive_search, full_list, FTag, Grid, SearchBounds, SearchShape, DEFAULT_SEARCH_CAP,
};
use ulrich_core::engine::DEFAULT_CAP;
use ulrich_core::error::NotPrimary;
use ulrich_core::resolution::{
    build_resolution, complex_defects, render_text,
    symbolic_resolution, ResolutionData,
};
use ulrich_core::ulrich::{check_certificate, is_ulrich, UlrichCertificate, UlrichOptions};
use ulrich_core::wire::{
    CertificateFile, CertificateJson, CheckJson, DecomposablesJson, EnumerateJson, InstanceJson, ResolutionChecksJson,
    ResolutionJson, SearchJson, VerdictJson, SCHEMA,
};
use ulrich_core::{parse_poly_list, Engine, Error, Field, Monomial, Poly, Ring};

#[derive(Parser, Debug)]
#[command(name = "ulrich", version, about = "Ulrich ideals in hypersurface local rings")]
struct Cli {
    /// Coefficient field: `q` or `fp:<prime>`.
    #[arg(long, global = true, default_value = "q")]
    field: String,
    /// Variable names, comma separated (`X,Y`), or a count `n` for `X1..Xn`.
    #[arg(long, global = true)]
    vars: Option<String>,
    /// Largest truncation order the engine may use.
    #[arg(long = "trunc-cap", global = true, default_value_t = DEFAULT_CAP)]
    trunc_cap: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a certificate, or decide whether `(gens)` is Ulrich in `S/(f)`.
    Verify(VerifyArgs),
    /// Print the resolution built from a certificate.
    Resolve(ResolveArgs),
    /// List classified family instances for an `f` tag.
    Enumerate(EnumerateArgs),
    /// Brute-force search over a prime field.
    Search(SearchArgs),
    /// Decomposable Ulrich ideals of a product of prime powers.
    Decomposables(DecomposablesArgs),
    /// Seeded random checks of the resolution identities.
    Selftest(SelftestArgs),
}

#[derive(Args, Debug, Default)]
struct CertArgs {
    #[arg(long, allow_hyphen_values = true)]
    f: Option<String>,
    /// `a₁, …, a_d`, comma separated or repeated.
    #[arg(long, allow_hyphen_values = true)]
    a: Vec<String>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    x: Vec<String>,
    #[arg(long, allow_hyphen_values = true)]
    eps: Option<String>,
    /// JSON certificate file.
    #[arg(long)]
    cert: Option<String>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    cert: CertArgs,
    /// Direct mode: the generators of `I`, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    gens: Option<String>,
    /// Indices of the generators forming the reduction `Q`.
    #[arg(long = "q-choice", value_delimiter = ',')]
    q_choice: Option<Vec<usize>>,
    /// Extra random reductions to try.
    #[arg(long = "random-reductions", default_value_t = 0)]
    random_reductions: usize,
    /// Look for a certificate when the ideal is Ulrich.
    #[arg(long = "search-cert")]
    search_cert: bool,
    #[arg(long = "cert-degree")]
    cert_degree: Option<u32>,
}

#[derive(Args, Debug)]
struct ResolveArgs {
    #[command(flatten)]
    cert: CertArgs,
    /// Use fresh variables a1..ad, b, x1..xd as entries.
    #[arg(long)]
    symbolic: Option<usize>,
    /// Run the complex, minimality, Fitting ideal and Betti checks.
    #[arg(long)]
    check: bool,
}

#[derive(Args, Debug)]
struct EnumerateArgs {
    #[arg(long = "f-tag")]
    f_tag: String,
    #[arg(long, default_value_t = 3)]
    lmax: u32,
    /// Unit constants to use, comma separated. Default: all nonzero
    /// constants over a prime field, `1` over the rationals.
    #[arg(long, allow_hyphen_values = true)]
    eps: Option<String>,
    /// Values of `alpha`, comma separated. Default `0`.
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[arg(long, allow_hyphen_values = true)]
    f: String,
    /// `y-multiple` or `xky`; chosen from `f` when omitted.
    #[arg(long)]
    shape: Option<String>,
    #[arg(long, default_value_t = 3)]
    nmax: u32,
    #[arg(long = "coeff-degree", default_value_t = 2)]
    coeff_degree: u32,
    #[arg(long = "max-candidates", default_value_t = DEFAULT_SEARCH_CAP)]
    max_candidates: u128,
}

#[derive(Args, Debug)]
struct DecomposablesArgs {
    /// `poly:exponent`, repeated.
    #[arg(long = "factor", required = true, allow_hyphen_values = true)]
    factors: Vec<String>,
}

#[derive(Args, Debug)]
struct SelftestArgs {
    #[arg(long, default_value_t = 20)]
    cases: usize,
    #[arg(long = "max-d", default_value_t = 3)]
    max_d: usize,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::SearchSpace { .. } | Error::NotPrimary(NotPrimary::CapExceeded { .. }) => 3,
            Error::InvalidCertificate(_) => 1,
            _ => 2,
        };
        Failure { code, msg: e.to_string() }
    }
}

impl From<String> for Failure {
    fn from(msg: String) -> Self {
        Failure { code: 2, msg }
    }
}

type Outcome = Result<u8, Failure>;

struct Ctx {
    field: Field,
    vars: Option<String>,
    engine: Engine,
    format: Format,
    seed: u64,
}

impl Ctx {
    fn ring(&self, default_vars: &str) -> Result<Arc<Ring>, Failure> {
        let spec = self.vars.as_deref().unwrap_or(default_vars);
        Ok(Ring::from_spec(self.field.clone(), spec)?)
    }

    fn emit<T: Serialize>(&self, json: &T, text: impl FnOnce() -> String) {
        let out = match self.format {
            Format::Json => serde_json::to_string_pretty(json).expect("serializable") + "\n",
            Format::Text => text(),
        };
        let mut stdout = std::io::stdout().lock();
        // A closed pipe (`ulrich ... | head`) is not an error worth reporting.
        if stdout.write_all(out.as_bytes()).and_then(|()| stdout.flush()).is_err() {
            std::process::exit(0);
        }
    }
}

fn list_arg(values: &[String], ring: &Arc<Ring>) -> Result<Vec<Poly>, Failure> {
    let mut out = Vec::new();
    for v in values {
        out.extend(parse_poly_list(v, ring)?);
    }
    Ok(out)
}

fn required<'a>(v: &'a Option<String>, name: &str) -> Result<&'a str, Failure> {
    v.as_deref().ok_or_else(|| Failure::from(format!("missing --{name}")))
}

/// Certificate from a file or from `--f --a --b --x --eps`.
fn read_certificate(ctx: &Ctx, args: &CertArgs) -> Result<UlrichCertificate, Failure> {
    if let Some(path) = &args.cert {
        let text = fs::read_to_string(path).map_err(|e| Failure::from(format!("{path}: {e}")))?;
        let file = CertificateFile::parse(&text)?;
        let field = match &file.field {
            Some(f) => f.parse::<Field>()?,
            None => ctx.field.clone(),
        };
        let ring = match (&file.vars, &ctx.vars) {
            (Some(v), _) => Ring::new(field, v)?,
            (None, Some(spec)) => Ring::from_spec(field, spec)?,
            (None, None) => default_ring(field, file.certificate.a.len() + 1),
        };
        return Ok(file.certificate.to_certificate(&ring)?);
    }
    let a_count: usize = args.a.iter().map(|s| s.split(',').count()).sum();
    let default_vars = if a_count <= 1 { "X,Y".to_string() } else { (a_count + 1).to_string() };
    let ring = ctx.ring(&default_vars)?;
    let f = Poly::parse(required(&args.f, "f")?, &ring)?;
    let b = Poly::parse(required(&args.b, "b")?, &ring)?;
    let eps = Poly::parse(required(&args.eps, "eps")?, &ring)?;
    Ok(UlrichCertificate::new(f, list_arg(&args.a, &ring)?, b, list_arg(&args.x, &ring)?, eps)?)
}

fn default_ring(field: Field, n: usize) -> Arc<Ring> {
    if n == 2 {
        Ring::xy(field)
    } else {
        Ring::indexed(field, n)
    }
}

fn cmd_verify(ctx: &Ctx, args: &VerifyArgs) -> Outcome {
    if let Some(gens) = &args.gens {
        let ring = ctx.ring("X,Y")?;
        let f = Poly::parse(required(&args.cert.f, "f")?, &ring)?;
        let gens = parse_poly_list(gens, &ring)?;
        let opts = UlrichOptions {
            q_choice: args.q_choice.clone(),
            random_reductions: args.random_reductions,
            seed: ctx.seed,
            search_certificate: args.search_cert,
            certificate_degree: args.cert_degree,
        };
        let v = is_ulrich(&ctx.engine, &gens, &f, &opts)?;
        let json = VerdictJson::new(&f, &gens, &v);
        ctx.emit(&json, || {
            let mut s = format!("ideal: ({})\nf: {}\nulrich: {}\nmu: {}\ncolength R/I: {}\n", json.ideal.join(", "), json.f, v.is_ulrich, v.mu, v.colength_ri);
            if let Some(c) = v.colength_rq {
                s += &format!("colength R/Q: {c}\n");
            }
            if let Some(q) = &json.q {
                s += &format!("Q: ({})\n", q.join(", "));
            }
            if let Some(r) = &json.failure_reason {
                s += &format!("failure: {r}\n");
            }
            if let Some(w) = &json.witness {
                s += &format!("witness: a = [{}], b = {}, x = [{}], epsilon = {}\n", w.a.join(", "), w.b, w.x.join(", "), w.epsilon);
            }
            s
        });
        return Ok(u8::from(!v.is_ulrich));
    }
    let c = read_certificate(ctx, &args.cert)?;
    let check = check_certificate(&ctx.engine, &c)?;
    let json = CheckJson::new(&c, &check);
    ctx.emit(&json, || {
        let mut s = format!("certificate valid: {}\n", json.valid);
        for (name, ok) in [
            ("identity", json.identity),
            ("unit", json.unit),
            ("parameters", json.parameters),
            ("membership", json.membership),
        ] {
            s += &format!("  {name}: {ok}\n");
        }
        if let Some(f) = &json.failed {
            s += &format!("failed: {f}\n");
        }
        s
    });
    Ok(u8::from(!check.is_valid()))
}

fn resolution_checks(ctx: &Ctx, r: &ResolutionData, symbolic: bool) -> Result<ResolutionChecksJson, Failure> {
    Ok(ResolutionChecksJson::compute(&ctx.engine, r, !symbolic)?)
}

fn cmd_resolve(ctx: &Ctx, args: &ResolveArgs) -> Outcome {
    let (r, symbolic) = match args.symbolic {
        Some(d) => (symbolic_resolution(d, ctx.field.clone())?, true),
        None => {
            let c = read_certificate(ctx, &args.cert)?;
            (build_resolution(&ctx.engine, &c)?, false)
        }
    };
    let checks = if args.check { Some(resolution_checks(ctx, &r, symbolic)?) } else { None };
    let code = u8::from(checks.as_ref().is_some_and(|c| !c.passed()));
    let json = ResolutionJson::new(&r, checks);
    ctx.emit(&json, || {
        let mut s = render_text(&r);
        if let Some(c) = &json.checks {
            s += &format!(
                "complex: {}\nminimal: {}\nfitting: {}\nranks: {:?}\nbetti: [{}]\n",
                c.complex,
                c.minimal,
                c.fitting.map_or("skipped".to_string(), |v| v.to_string()),
                c.ranks,
                c.betti.join(", ")
            );
            for d in &c.defects {
                s += &format!("failed: {d}\n");
            }
        }
        s
    });
    Ok(code)
}

fn cmd_enumerate(ctx: &Ctx, args: &EnumerateArgs) -> Outcome {
    let tag = FTag::parse(&args.f_tag)?;
    let list = full_list(tag)?;
    let ring = ctx.ring("X,Y")?;
    let mut grid = Grid::constants(&ring, args.lmax);
    if let Some(e) = &args.eps {
        grid.units = parse_poly_list(e, &ring)?;
    }
    if let Some(a) = &args.alpha {
        grid.alphas = parse_poly_list(a, &ring)?;
    }
    let instances = list.instances(&ring, &grid)?;
    let json = EnumerateJson {
        schema: SCHEMA,
        tag: tag.to_string(),
        partial: list.partial,
        families: list.entries.iter().map(|e| e.family.tag().to_string()).collect(),
        instances: instances.iter().map(InstanceJson::from).collect(),
    };
    ctx.emit(&json, || {
        let mut s = format!("{}{}: {} instances\n", json.tag, if json.partial { " (partial list)" } else { "" }, instances.len());
        for i in &instances {
            s += &format!("  {}: ({}, {})\n", i.label(), i.gens[0], i.gens[1]);
        }
        s
    });
    Ok(0)
}

fn cmd_search(ctx: &Ctx, args: &SearchArgs) -> Outcome {
    let ring = ctx.ring("X,Y")?;
    let f = Poly::parse(&args.f, &ring)?;
    let shape = match &args.shape {
        Some(s) => SearchShape::from_tag(s).ok_or_else(|| Failure::from(format!("unknown shape `{s}`")))?,
        None => SearchShape::for_f(&f)
            .ok_or_else(|| Failure::from(format!("no default shape for f = {f}; pass --shape")))?,
    };
    let bounds = SearchBounds { nmax: args.nmax, coeff_degree: args.coeff_degree, cap: args.max_candidates };
    let report = exhaustive_search(&ctx.engine, &f, shape, bounds)?;
    let json = SearchJson::from(&report);
    ctx.emit(&json, || {
        let mut s = format!(
            "f = {} over {}, shape {}, n <= {}, coefficient degree <= {}\ncandidates: {}, Ulrich: {}\n",
            json.f, json.field, json.shape, args.nmax, args.coeff_degree, json.candidates, json.ulrich_candidates
        );
        for g in &json.found {
            s += &format!(
                "  ({}) colength {} -> {}\n",
                g.ideal.join(", "),
                g.colength,
                g.matched.as_deref().unwrap_or("UNMATCHED")
            );
        }
        for m in &json.missing {
            s += &format!("  missing: {m}\n");
        }
        s += &format!("agrees with list: {}\n", json.agrees);
        s
    });
    let complete_list = report.list.is_some() && !report.partial;
    Ok(u8::from(complete_list && !report.agrees()))
}

fn cmd_decomposables(ctx: &Ctx, args: &DecomposablesArgs) -> Outcome {
    let ring = ctx.ring("X,Y")?;
    let mut factors = Vec::new();
    for spec in &args.factors {
        let (p, e) = spec.rsplit_once(':').ok_or_else(|| Failure::from(format!("factor `{spec}` is not poly:exponent")))?;
        let e: u32 = e.trim().parse().map_err(|_| Failure::from(format!("bad exponent in `{spec}`")))?;
        factors.push((Poly::parse(p, &ring)?, e));
    }
    let f = factors.iter().fold(Poly::one(&ring), |acc, (p, e)| &acc * &p.pow(*e));
    let pairs = decomposables(&ctx.engine, &factors)?;
    let json = DecomposablesJson {
        schema: SCHEMA,
        f: f.to_string(),
        pairs: pairs.iter().map(|j| j.gens().iter().map(Poly::to_string).collect()).collect(),
    };
    ctx.emit(&json, || {
        let mut s = format!("f = {}: {} pairs\n", json.f, json.pairs.len());
        for p in &json.pairs {
            s += &format!("  ({})\n", p.join(", "));
        }
        s
    });
    Ok(0)
}

#[derive(Serialize)]
struct SelftestJson {
    schema: u32,
    seed: u64,
    cases: usize,
    failures: Vec<CertificateJson>,
}

fn random_in_max(rng: &mut ChaCha8Rng, ring: &Arc<Ring>) -> Poly {
    let p = ring.field().characteristic().max(11) as i64;
    let terms: Vec<_> = (1..=2u32)
        .flat_map(|deg| Monomial::of_degree(ring.nvars(), deg))
        .filter_map(|m| {
            let c = rng.gen_range(-(p / 2)..=p / 2);
            (c != 0).then(|| (m, ring.field().from_i64(c)))
        })
        .collect();
    Poly::from_terms(ring, terms)
}

fn cmd_selftest(ctx: &Ctx, args: &SelftestArgs) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let mut failures = Vec::new();
    let mut cases = 0;
    for d in 1..=args.max_d.max(1) {
        let ring = Ring::indexed(ctx.field.clone(), d + 1);
        for _ in 0..args.cases {
            let a: Vec<Poly> = (0..d).map(|_| random_in_max(&mut rng, &ring)).collect();
            let b = random_in_max(&mut rng, &ring);
            let x: Vec<Poly> = (0..d).map(|_| random_in_max(&mut rng, &ring)).collect();
            let mut f = &b * &b;
            for (ai, xi) in a.iter().zip(&x) {
                f = &f + &(ai * xi);
            }
            let c = UlrichCertificate::new(f, a, b, x, Poly::one(&ring))?;
            let r = ulrich_core::resolution::build_resolution_unchecked(&c)?;
            if !complex_defects(&r).is_empty() {
                failures.push(CertificateJson::from(&c));
            }
            cases += 1;
        }
    }
    let json = SelftestJson { schema: SCHEMA, seed: ctx.seed, cases, failures };
    ctx.emit(&json, || format!("selftest: {} cases, {} failures (seed {})\n", json.cases, json.failures.len(), json.seed));
    Ok(u8::from(!json.failures.is_empty()))
}

fn run(cli: &Cli) -> Outcome {
    let field: Field = cli.field.parse()?;
    let ctx = Ctx {
        field,
        vars: cli.vars.clone(),
        engine: Engine::new(cli.trunc_cap)?,
        format: cli.format,
        seed: cli.seed,
    };
    match &cli.command {
        Command::Verify(a) => cmd_verify(&ctx, a),
        Command::Resolve(a) => cmd_resolve(&ctx, a),
        Command::Enumerate(a) => cmd_enumerate(&ctx, a),
        Command::Search(a) => cmd_search(&ctx, a),
        Command::Decomposables(a) => cmd_decomposables(&ctx, a),
        Command::Selftest(a) => cmd_selftest(&ctx, a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
