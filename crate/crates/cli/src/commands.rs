use serde_json::{json, Value};
use univoque::arith::rational::{int, parse_rational, to_decimal};
use univoque::arith::{AlgebraicReal, Poly};
use univoque::constants::{golden_ratio_general, komornik_loreti};
use univoque::dimension::{admissible_word_count, dim_u_q, scan_dimension, ScanRecord};
use univoque::expansion::{
    alpha_info, enumerate_expansions, greedy_expansion, lazy_expansion, quasi_greedy_expansion, uniqueness_certificate,
};
use univoque::transversality::{transversality_root, verify_inspection_inequalities, verify_star};
use univoque::two_expansion::{check_u2_point, construct_u2_candidates};
use univoque::{
    BaseEnclosure, DiffSeries, DigitWord, Error, EventuallyPeriodicSeq, Rational, RationalInterval, RefinementBudget, Result,
};

use crate::output::{enclosure_json, json_text, provenance, write, DECIMALS};
use crate::{selftest, Cli, Command, Format, Mode, U2Action, Which};

pub struct Ctx {
    pub precision: Rational,
    pub budget: RefinementBudget,
}

enum Emit {
    Json(Value),
    Csv(String),
}

pub const EXIT_FAIL: u8 = 1;
pub const EXIT_DOMAIN: u8 = 2;
pub const EXIT_INCONCLUSIVE: u8 = 3;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::PrecisionExhausted { .. } | Error::Budget(_) => EXIT_INCONCLUSIVE,
        Error::CertificationFailure(_) => EXIT_FAIL,
        _ => EXIT_DOMAIN,
    }
}

fn required<T: Clone>(v: &Option<T>, flag: &str) -> Result<T> {
    v.clone().ok_or_else(|| Error::Parse(format!("missing --{flag}")))
}

/// A base from a rational, an interval `[a,b]`, or a name: kl, gr (golden, phi), tribonacci.
pub fn parse_base(text: &str, m: u32, ctx: &Ctx) -> Result<BaseEnclosure> {
    let t = text.trim();
    let base = match t.to_ascii_lowercase().as_str() {
        "kl" => komornik_loreti(m, &ctx.precision)?,
        "gr" | "golden" | "phi" => golden_ratio_general(m)?,
        "tribonacci" => {
            let a = AlgebraicReal::isolate(&Poly::from_ints(&[-1, -1, -1, 1]), int(1), int(2))?;
            BaseEnclosure::algebraic(m, a)?
        }
        _ => match t.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            Some(inner) => {
                let (a, b) = inner.split_once(',').ok_or_else(|| Error::Parse(format!("bad interval {t:?}")))?;
                BaseEnclosure::interval(m, RationalInterval::new(parse_rational(a)?, parse_rational(b)?)?)?
            }
            None => BaseEnclosure::rational(m, parse_rational(t)?)?,
        },
    };
    let base = if base.exact().is_some() && !base.q().is_point() { base.tightened(&ctx.precision) } else { base };
    Ok(base.with_budget(ctx.budget))
}

pub fn run(cli: Cli, argv: &[String]) -> u8 {
    let g = &cli.global;
    let precision = match parse_rational(&g.precision) {
        Ok(p) if p > int(0) => p,
        _ => {
            eprintln!("error: --precision must be a positive number");
            return EXIT_DOMAIN;
        }
    };
    let mut budget = RefinementBudget::default();
    if let Some(n) = g.budget {
        budget.max_nodes = n;
    }
    if let Some(d) = g.max_depth {
        budget.max_depth = d;
    }
    if let Some(s) = g.max_splits {
        budget.max_splits = s;
    }
    if let Some(j) = g.jobs {
        if j == 0 || rayon::ThreadPoolBuilder::new().num_threads(j).build_global().is_err() {
            eprintln!("error: --jobs must be positive");
            return EXIT_DOMAIN;
        }
    }
    let prov = provenance(argv, &budget, &precision, g.jobs);
    let ctx = Ctx { precision, budget };
    let dest = g.output.clone();

    let result = dispatch(&cli.command, &ctx);
    match result {
        Ok((Emit::Json(mut v), code)) => {
            if let Some(obj) = v.as_object_mut() {
                obj.insert("provenance".into(), prov);
            }
            finish(dest.as_deref(), &json_text(&v), code)
        }
        Ok((Emit::Csv(text), code)) => finish(dest.as_deref(), &text, code),
        Err(e) => {
            eprintln!("error: {e}");
            let code = exit_code(&e);
            if code == EXIT_INCONCLUSIVE {
                let v = json!({ "inconclusive": true, "error": e.to_string(), "provenance": prov });
                return finish(dest.as_deref(), &json_text(&v), code);
            }
            code
        }
    }
}

fn finish(dest: Option<&std::path::Path>, text: &str, code: u8) -> u8 {
    match write(dest, text) {
        Ok(()) => code,
        Err(e) => {
            eprintln!("error: cannot write output: {e}");
            EXIT_FAIL
        }
    }
}

fn selftest_result(name: &str) -> Result<(Emit, u8)> {
    let (report, ok) = selftest::run(name);
    Ok((Emit::Json(report), if ok { 0 } else { EXIT_FAIL }))
}

fn dispatch(cmd: &Command, ctx: &Ctx) -> Result<(Emit, u8)> {
    let ok = |v: Value| Ok((Emit::Json(v), 0));
    match cmd {
        Command::Selftest => selftest_result("all"),
        Command::Constants(a) if a.selftest => selftest_result("constants"),
        Command::Constants(a) => ok(constants(required(&a.m, "M")?, a.which, a.q.as_deref(), a.n, ctx)?),
        Command::Expand(a) if a.selftest => selftest_result("expand"),
        Command::Expand(a) => {
            let m = required(&a.m, "M")?;
            let base = parse_base(&required(&a.q, "q")?, m, ctx)?;
            ok(expand(&base, &parse_rational(&required(&a.x, "x")?)?, a.depth, a.mode)?)
        }
        Command::Unique(a) if a.selftest => selftest_result("unique"),
        Command::Unique(a) => {
            let m = required(&a.m, "M")?;
            let base = parse_base(&required(&a.q, "q")?, m, ctx)?;
            let s = EventuallyPeriodicSeq::parse(&required(&a.seq, "seq")?, m)?;
            let verdict = uniqueness_certificate(&s, &base, a.depth)?;
            ok(json!({ "seq": s, "q": enclosure_json(&base), "depth": a.depth, "verdict": verdict }))
        }
        Command::Root(a) if a.selftest => selftest_result("root"),
        Command::Root(a) => {
            let m = required(&a.m, "M")?;
            let diff = DiffSeries::parse(&required(&a.diff, "diff")?, m)?;
            let window =
                RationalInterval::new(parse_rational(&required(&a.lo, "lo")?)?, parse_rational(&required(&a.hi, "hi")?)?)?;
            let r = transversality_root(&diff, &window, &ctx.precision)?;
            let mut v = serde_json::to_value(&r).expect("root serializes");
            if let Some(q) = r.root() {
                v["q"] = enclosure_json(q);
            }
            ok(json!({ "diff": diff, "window": window, "root": v }))
        }
        Command::Certify(a) if a.selftest => selftest_result("certify"),
        Command::Certify(a) => ok(certify(required(&a.m, "M")?, ctx)?),
        Command::U2(a) if a.selftest || a.action.is_none() => selftest_result("u2"),
        Command::U2(a) => match a.action.as_ref().expect("checked above") {
            U2Action::Search(s) => {
                let window = RationalInterval::new(parse_rational(&s.q_lo)?, parse_rational(&s.q_hi)?)?;
                let records = construct_u2_candidates(s.m, &window, s.period_bound, s.preperiod_bound)?;
                let constructive = records.iter().filter(|r| r.constructive).count();
                let v = json!({
                    "M": s.m,
                    "window": window,
                    "period_bound": s.period_bound,
                    "preperiod_bound": s.preperiod_bound,
                    "records": records,
                    "count": records.len(),
                    "constructive": constructive,
                });
                if let Some(p) = &s.json {
                    write(Some(p), &json_text(&v)).map_err(|e| Error::Domain(format!("cannot write {}: {e}", p.display())))?;
                }
                ok(v)
            }
            U2Action::Check(c) => {
                let m = c.m_alphabet;
                let base = parse_base(&c.q, m, ctx)?;
                let w = DigitWord::parse(&c.w, m)?;
                let a = EventuallyPeriodicSeq::parse(&c.a, m)?;
                let b = EventuallyPeriodicSeq::parse(&c.b, m)?;
                let cert = check_u2_point(&w, c.m, &a, &b, &base, c.depth)?;
                let mut v = serde_json::to_value(&cert).expect("certificate serializes");
                v["q"] = enclosure_json(&base);
                v["confirmed"] = json!(cert.confirmed());
                ok(v)
            }
        },
        Command::Dim(a) if a.selftest => selftest_result("dim"),
        Command::Dim(a) => {
            let m = required(&a.m, "M")?;
            let base = parse_base(&required(&a.q, "q")?, m, ctx)?;
            let d = dim_u_q(&base, a.n, a.l)?;
            let counts = admissible_word_count(&base, a.n, a.l)?;
            let mut v = serde_json::to_value(&d).expect("dimension serializes");
            v["q"] = enclosure_json(&base);
            v["lo_decimal"] = json!(to_decimal(&d.lo, 12, false));
            v["hi_decimal"] = json!(to_decimal(&d.hi, 12, true));
            v["counts"] = serde_json::to_value(&counts).expect("counts serialize");
            ok(v)
        }
        Command::Scan(a) if a.selftest => selftest_result("scan"),
        Command::Scan(a) => {
            let m = required(&a.m, "M")?;
            let lo = parse_rational(&required(&a.q_lo, "q-lo")?)?;
            let hi = parse_rational(&required(&a.q_hi, "q-hi")?)?;
            let grid = grid(m, &lo, &hi, a.steps, ctx)?;
            let records = scan_dimension(m, &grid, a.n, a.l)?;
            match a.out {
                Format::Json => ok(json!({ "M": m, "n": a.n, "L": a.l, "records": records })),
                Format::Csv => Ok((Emit::Csv(scan_csv(&records)), 0)),
            }
        }
        Command::Inspect(a) if a.selftest => selftest_result("inspect"),
        Command::Inspect(a) => {
            let m = required(&a.m, "M")?;
            ok(json!({ "M": m, "certificates": verify_inspection_inequalities(m)? }))
        }
    }
}

pub fn constants(m: u32, which: Which, q: Option<&str>, n: usize, ctx: &Ctx) -> Result<Value> {
    match which {
        Which::Kl => {
            let mut v = enclosure_json(&komornik_loreti(m, &ctx.precision)?);
            v["name"] = json!("q_KL");
            Ok(v)
        }
        Which::Gr => {
            let gr = golden_ratio_general(m)?;
            let gr = if gr.q().is_point() { gr } else { gr.tightened(&ctx.precision) };
            let mut v = enclosure_json(&gr);
            v["name"] = json!("q_GR");
            Ok(v)
        }
        Which::Alpha => {
            let q = q.ok_or_else(|| Error::Parse("--which alpha needs --q".into()))?;
            let base = parse_base(q, m, ctx)?;
            let info = alpha_info(&base, n)?;
            let digits = DigitWord::new(info.digits.iter().take(n).copied().collect(), m)?;
            Ok(json!({
                "name": "alpha",
                "M": m,
                "q": enclosure_json(&base),
                "digits": digits,
                "certified_digits": digits.len(),
                "stuck_at": info.stuck_at,
                "periodic": info.periodic,
            }))
        }
    }
}

pub fn expand(base: &BaseEnclosure, x: &Rational, depth: usize, mode: Mode) -> Result<Value> {
    let xi = RationalInterval::point(x.clone());
    let name = match mode {
        Mode::Greedy => "greedy",
        Mode::QuasiGreedy => "quasi-greedy",
        Mode::Lazy => "lazy",
        Mode::Enumerate => {
            let tree = enumerate_expansions(&xi, base, depth)?;
            let mut v = serde_json::to_value(&tree).expect("tree serializes");
            v["live"] = json!(tree.live_count());
            v["ambiguous"] = json!(tree.ambiguous_count());
            v["mode"] = json!("enumerate");
            return Ok(v);
        }
    };
    let digits = match mode {
        Mode::Greedy => greedy_expansion(&xi, base, depth)?,
        Mode::QuasiGreedy => quasi_greedy_expansion(&xi, base, depth)?,
        _ => lazy_expansion(&xi, base, depth)?,
    };
    Ok(json!({ "mode": name, "x": xi, "q": enclosure_json(base), "depth": depth, "digits": digits }))
}

pub fn certify(m: u32, ctx: &Ctx) -> Result<Value> {
    let star = verify_star(m)?;
    let inspection = match verify_inspection_inequalities(m) {
        Ok(c) => json!(c),
        Err(e) => json!({ "error": e.to_string() }),
    };
    Ok(json!({
        "M": m,
        "transversality": star,
        "inspection": inspection,
        "q_KL": enclosure_json(&komornik_loreti(m, &ctx.precision)?),
        "q_GR": enclosure_json(&golden_ratio_general(m)?),
    }))
}

/// `steps` equally spaced rationals from `lo` to `hi` inclusive.
pub fn grid(m: u32, lo: &Rational, hi: &Rational, steps: usize, ctx: &Ctx) -> Result<Vec<BaseEnclosure>> {
    if steps == 0 || lo > hi {
        return Err(Error::Domain("scan needs steps >= 1 and q-lo <= q-hi".into()));
    }
    (0..steps)
        .map(|i| {
            let q = if steps == 1 { lo.clone() } else { lo + (hi - lo) * Rational::new(i.into(), (steps - 1).into()) };
            Ok(BaseEnclosure::rational(m, q)?.with_budget(ctx.budget))
        })
        .collect()
}

pub fn scan_csv(records: &[ScanRecord]) -> String {
    let mut out = String::from("q_lo,q_hi,dim_lo,dim_hi,bound_lo,bound_hi,inO\n");
    let dec = |r: &Rational, up: bool| to_decimal(r, DECIMALS.min(12), up);
    for r in records {
        let mut cols = vec![dec(r.q.lo(), false), dec(r.q.hi(), true)];
        match (&r.dimension, &r.bound) {
            (Some(d), Some(b)) => {
                cols.extend([dec(&d.lo, false), dec(&d.hi, true), dec(b.lo(), false), dec(b.hi(), true)]);
            }
            _ => cols.extend(std::iter::repeat_n(String::new(), 4)),
        }
        cols.push(r.in_o.to_string());
        out.push_str(&cols.join(","));
        out.push('\n');
    }
    out
}
