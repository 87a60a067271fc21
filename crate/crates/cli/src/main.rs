use std::fmt::Write as _;
use std::ops::Range;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use floer_gysin::analysis::{Analysis, Check};
use floer_gysin::gf2::{BitMatrix, BitVec};
use floer_gysin::graded::{Model, View};
use floer_gysin::gysin::GysinReport;
use floer_gysin::positivity::{narrowness_obstruction, periodicity_check, sigma_map, Periodicity};
use floer_gysin::quantum::{
    check_leibniz, delta_equals_mult_euler, euler_from_disk_counts, quantum_restriction, HomologyRing,
};
use floer_gysin::{DatasetFile, Error};

#[derive(Parser)]
#[command(name = "engine", version, about = "Floer-Gysin computations on pearl-complex datasets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Structural checks and dataset expectations
    Check(Opts),
    /// The Floer-Gysin long exact sequence
    Les(Opts),
    /// The Floer-Euler class and its other descriptions
    Euler(Opts),
    /// Quantum product checks and invertibility of e_F
    Product(Opts),
    /// The classical (t = 0) Gysin sequence
    Classical(Opts),
    /// 2-periodicity and the narrowness criterion
    Periodicity(Opts),
}

#[derive(Args)]
struct Opts {
    /// Dataset file, or the name of a bundled dataset
    file: PathBuf,
    /// Half-open degree window `a..b`
    #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
    window: Option<Range<i64>>,
    /// Work over the ambient ring Z2[q, q^-1]
    #[arg(long)]
    ambient: bool,
    /// Machine-readable output
    #[arg(long)]
    json: bool,
}

fn parse_window(s: &str) -> Result<Range<i64>, String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected a..b, got `{s}`"))?;
    let a: i64 = a.trim().parse().map_err(|e| format!("bad window start: {e}"))?;
    let b: i64 = b.trim().parse().map_err(|e| format!("bad window end: {e}"))?;
    if a > b {
        return Err(format!("empty window {a}..{b}"));
    }
    Ok(a..b)
}

const OK: u8 = 0;
const STRUCTURAL: u8 = 1;
const MISMATCH: u8 = 2;
const INPUT: u8 = 3;

struct Report {
    text: String,
    json: Value,
    code: u8,
}

fn corpus_dir() -> PathBuf {
    std::env::var_os("ENGINE_CORPUS_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus"))
}

fn resolve(file: &Path) -> PathBuf {
    if file.exists() {
        return file.to_path_buf();
    }
    let dir = corpus_dir();
    let named = dir.join(file);
    if named.exists() {
        return named;
    }
    let mut with_ext = dir.join(file);
    with_ext.set_extension("json");
    if with_ext.exists() {
        with_ext
    } else {
        file.to_path_buf()
    }
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::DSquaredNonZero(_) | Error::TwistNotCocycle(_) | Error::NotCocycle(_) => STRUCTURAL,
        _ => INPUT,
    }
}

type Runner = fn(&Analysis, &Opts) -> Result<Report, Error>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (opts, run): (&Opts, Runner) = match &cli.command {
        Command::Check(o) => (o, cmd_check),
        Command::Les(o) => (o, cmd_les),
        Command::Euler(o) => (o, cmd_euler),
        Command::Product(o) => (o, cmd_product),
        Command::Classical(o) => (o, cmd_classical),
        Command::Periodicity(o) => (o, cmd_periodicity),
    };
    let result = DatasetFile::load(resolve(&opts.file)).and_then(Analysis::new).and_then(|a| run(&a, opts));
    match result {
        Ok(report) => {
            if opts.json {
                println!("{}", serde_json::to_string_pretty(&report.json).expect("report serializes"));
            } else {
                print!("{}", report.text);
            }
            ExitCode::from(report.code)
        }
        Err(e) => {
            let code = error_code(&e);
            if opts.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({ "error": e.to_string(), "exit_code": code })).unwrap()
                );
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(code)
        }
    }
}

fn matrix(m: &BitMatrix) -> String {
    if m.nrows() == 0 || m.ncols() == 0 {
        return format!("0 ({}x{})", m.nrows(), m.ncols());
    }
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| if m.get(i, j) { '1' } else { '0' }).collect::<String>())
        .collect::<Vec<_>>()
        .join("/")
}

fn matrix_json(m: &BitMatrix) -> Value {
    json!((0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m.get(i, j) as u8).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn bits(v: &BitVec) -> Vec<u8> {
    (0..v.len()).map(|i| v.get(i) as u8).collect()
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn check_lines(out: &mut String, checks: &[Check]) {
    for c in checks {
        let mark = if c.ok { "ok  " } else { "FAIL" };
        if c.ok || c.detail.is_empty() {
            let _ = writeln!(out, "  {mark}  {}", c.name);
        } else {
            let _ = writeln!(out, "  {mark}  {}: {}", c.name, c.detail);
        }
    }
}

fn cmd_check(a: &Analysis, _: &Opts) -> Result<Report, Error> {
    let structural = a.structural_checks();
    let expectations = a.expectation_checks();
    let mut text = format!("dataset {} (N = {})\nstructural checks\n", a.base().name(), a.n());
    check_lines(&mut text, &structural);
    if !expectations.is_empty() {
        text.push_str("expectations\n");
        check_lines(&mut text, &expectations);
    }
    let code = if structural.iter().any(|c| !c.ok) {
        STRUCTURAL
    } else if expectations.iter().any(|c| !c.ok) {
        MISMATCH
    } else {
        OK
    };
    text.push_str(if code == OK { "all checks pass\n" } else { "some checks failed\n" });
    let json = json!({
        "dataset": a.base().name(),
        "structural": structural,
        "expectations": expectations,
        "exit_code": code,
    });
    Ok(Report { text, json, code })
}

fn les_table(out: &mut String, r: &GysinReport, ring: &str) -> Value {
    let _ = writeln!(out, "   k  {ring}^k(L) -δ-> {ring}^k+2(L) -i-> {ring}^k+2(Γ) -p-> {ring}^k+1(L)  exact");
    let mut rows = Vec::new();
    for row in &r.rows {
        let _ = writeln!(
            out,
            "  {:>2}  {:>8}      {:>10}      {:>10}      {:>10}  {}",
            row.k,
            row.dim_l_k,
            row.dim_l_k2,
            row.dim_gamma_k2,
            row.dim_l_k1,
            yes(row.exact())
        );
        let _ = writeln!(out, "      δ = {}   i = {}   p = {}", matrix(&row.delta), matrix(&row.i), matrix(&row.p));
        rows.push(json!({
            "k": row.k,
            "dims": [row.dim_l_k, row.dim_l_k2, row.dim_gamma_k2, row.dim_l_k1],
            "delta": matrix_json(&row.delta),
            "i": matrix_json(&row.i),
            "p": matrix_json(&row.p),
            "exact": [row.exact_at_l_k2, row.exact_at_gamma, row.exact_at_l_k1],
        }));
    }
    json!(rows)
}

fn cmd_les(a: &Analysis, o: &Opts) -> Result<Report, Error> {
    let mut text = String::new();
    let (report, euler, extra) = if o.ambient {
        let amb = a.ambient()?.ok_or(Error::OddMaslov(a.n()))?;
        let window = o.window.clone().unwrap_or(0..2);
        let r = amb.bundle.long_exact_sequence(Model::Laurent, window)?;
        let _ = writeln!(text, "ambient Floer-Gysin sequence of {} over Z2[q, q^-1]", a.base().name());
        let delta_ok = amb.delta.iter().all(|(_, ok)| *ok);
        let extra = json!({ "delta_m_equals_delta_w_plus_q": delta_ok, "euler_relation": amb.euler_matches });
        (r, amb.euler.map(|e| ("e'_F", e.display)), extra)
    } else {
        let window = o.window.clone().unwrap_or_else(|| a.period());
        let r = a.gysin(window)?;
        let _ = writeln!(text, "Floer-Gysin sequence of {} (N = {})", a.base().name(), a.n());
        (r, a.euler_class()?.map(|e| ("e_F", e.display)), json!({}))
    };
    let ring = if o.ambient { "QH_M" } else { "QH" };
    let rows = les_table(&mut text, &report, ring);
    if let Some((name, e)) = &euler {
        let _ = writeln!(text, "{name} = {e}");
    }
    let dims: Vec<usize> = report.gamma_dims.iter().map(|&(_, d)| d).collect();
    let _ = writeln!(text, "{ring}(Γ) dims {dims:?}, vanishes: {}", yes(report.gamma_vanishes()));
    if o.ambient {
        let _ = writeln!(text, "δ_M = δ_W + q: {}", yes(extra["delta_m_equals_delta_w_plus_q"] == json!(true)));
    }
    let exact = report.all_exact();
    let _ = writeln!(text, "exact at every node: {}", yes(exact));
    let json = json!({
        "dataset": a.base().name(),
        "ambient": o.ambient,
        "rows": rows,
        "gamma_dims": report.gamma_dims,
        "gamma_vanishes": report.gamma_vanishes(),
        "euler_class": euler.map(|(_, e)| e),
        "exact": exact,
        "ambient_relations": extra,
    });
    Ok(Report { text, json, code: if exact { OK } else { STRUCTURAL } })
}

fn cmd_euler(a: &Analysis, o: &Opts) -> Result<Report, Error> {
    let unit = a.unit.as_ref().ok_or(Error::MissingUnit)?;
    let base = a.base();
    let e = a.bundle.euler_class(unit, Model::Laurent)?;
    let h2 = View::new(base, Model::Laurent).cohomology(2).dim();
    let note = if e.is_zero() {
        "zero"
    } else if h2 == 1 {
        "generator of QH²"
    } else {
        "nonzero"
    };
    let mut text = format!("e_F = [{}] ({note})\n", e.display);
    let mut json = json!({
        "dataset": base.name(),
        "euler_class": e.display,
        "coordinates": bits(&e.coordinates),
        "zero": e.is_zero(),
    });
    if let Some(pos) = a.positive() {
        let plus = pos.euler_class(unit, Model::Positive)?;
        let classical = pos.euler_class(unit, Model::Classical)?;
        let sigma = sigma_map(pos.base(), 2)?.mul_vec(&plus.coordinates);
        let e_text = if classical.is_zero() { "0".to_string() } else { base.format(&classical.representative) };
        let _ = writeln!(text, "classical e = {e_text}; σ(e_F) = e: {}", yes(sigma == classical.coordinates));
        json["classical_euler_class"] = json!(e_text);
        json["sigma_matches"] = json!(sigma == classical.coordinates);
    }
    if let Some(mad) = &a.data.module_action {
        let r = quantum_restriction(base, mad, unit)?;
        let class = View::new(base, Model::Laurent).cohomology(2).class_of(&r)?;
        let _ = writeln!(
            text,
            "r_L({}) = {}; equals e_F: {}",
            mad.normal_chern_class,
            base.format(&r),
            yes(class == e.coordinates)
        );
        json["quantum_restriction"] = json!(base.format(&r));
        json["restriction_matches"] = json!(class == e.coordinates);
    }
    if let Some(counts) = &a.data.disk_counts {
        match euler_from_disk_counts(counts, a.n(), unit) {
            Ok(c) => {
                let class = View::new(base, Model::Laurent).cohomology(2).class_of(&c)?;
                let _ = writeln!(
                    text,
                    "from disk counts: {}; equals e_F: {}",
                    base.format(&c),
                    yes(class == e.coordinates)
                );
                json["disk_count_formula"] = json!(base.format(&c));
                json["disk_count_matches"] = json!(class == e.coordinates);
            }
            Err(err) => {
                let _ = writeln!(text, "from disk counts: {err}");
            }
        }
    }
    if o.ambient {
        let amb = a.ambient()?.ok_or(Error::OddMaslov(a.n()))?;
        if let Some(em) = amb.euler {
            let _ = writeln!(text, "e'_F = [{}]; e'_F = e_F + q: {}", em.display, yes(amb.euler_matches == Some(true)));
            json["ambient_euler_class"] = json!(em.display);
            json["ambient_relation"] = json!(amb.euler_matches);
        }
    }
    Ok(Report { text, json, code: OK })
}

fn cmd_product(a: &Analysis, _: &Opts) -> Result<Report, Error> {
    let product = a.product.as_ref().ok_or_else(|| Error::InvalidData("dataset has no product data".into()))?;
    let base = a.base();
    let leibniz = check_leibniz(base, product);
    let mut text = format!("quantum product on {}\n", base.name());
    let _ = writeln!(
        text,
        "Leibniz: {}",
        if leibniz.is_empty() { "OK".to_string() } else { format!("fails at {leibniz:?}") }
    );
    let mut json = json!({ "dataset": base.name(), "leibniz": leibniz.is_empty() });
    if !leibniz.is_empty() {
        return Ok(Report { text, json, code: STRUCTURAL });
    }
    let ring = HomologyRing::new(base, product, Model::Laurent);
    let verdict = ring.check(a.period())?;
    let _ = writeln!(text, "associativity: {}", if verdict.associative { "OK" } else { "fails" });
    let _ = writeln!(text, "unit: {}", if verdict.unital { "OK" } else { "fails" });
    json["associative"] = json!(verdict.associative);
    json["unital"] = json!(verdict.unital);
    let e = a.bundle.euler_class(a.unit.as_ref().ok_or(Error::MissingUnit)?, Model::Laurent)?;
    match ring.inverse(2, &e.coordinates) {
        Ok(inv) => {
            let rep = base.format(&ring.lift(-2, &inv));
            let _ = writeln!(text, "e_F = {} invertible, inverse {rep}", e.display);
            json["euler_inverse"] = json!(rep);
        }
        Err(err) => {
            let _ = writeln!(text, "e_F = {} not invertible ({err})", e.display);
            json["euler_inverse"] = Value::Null;
        }
    }
    let d = delta_equals_mult_euler(&a.bundle, product, Model::Laurent, a.period())?;
    let _ = writeln!(text, "δ(α) = α*e_F = e_F*α: {}", if d.is_ok() { "OK" } else { "fails" });
    json["delta_is_euler_multiplication"] = json!(d.is_ok());
    let ok = verdict.is_ok() && d.is_ok();
    Ok(Report { text, json, code: if ok { OK } else { STRUCTURAL } })
}

fn cmd_classical(a: &Analysis, o: &Opts) -> Result<Report, Error> {
    let r = match &o.window {
        Some(w) => a.bundle.long_exact_sequence(Model::Classical, w.clone())?,
        None => a.classical()?,
    };
    let mut text = format!("classical Gysin sequence of {}\n", a.base().name());
    let rows = les_table(&mut text, &r, "H");
    let base: Vec<usize> = r.base_dims.iter().map(|&(_, d)| d).collect();
    let gamma: Vec<usize> = r.gamma_dims.iter().map(|&(_, d)| d).collect();
    let _ = writeln!(text, "H*(L)  = {base:?}");
    let _ = writeln!(text, "H*(Γ)  = {gamma:?}");
    let mut json = json!({
        "dataset": a.base().name(),
        "rows": rows,
        "base_dims": r.base_dims,
        "gamma_dims": r.gamma_dims,
        "exact": r.all_exact(),
    });
    if let Some(unit) = &a.unit {
        let e = a.bundle.euler_class(unit, Model::Classical)?;
        let shown = if e.is_zero() { "0".to_string() } else { a.base().format(&e.representative) };
        let _ = writeln!(text, "e = {shown}");
        json["euler_class"] = json!(shown);
    }
    let _ = writeln!(text, "exact at every node: {}", yes(r.all_exact()));
    Ok(Report { text, json, code: if r.all_exact() { OK } else { STRUCTURAL } })
}

fn cmd_periodicity(a: &Analysis, _: &Opts) -> Result<Report, Error> {
    let table = a.cohomology()?;
    let gamma = a.gysin(a.period())?;
    let verdict = periodicity_check(&table, gamma.gamma_vanishes());
    let answer = match verdict {
        Periodicity::Periodic => "yes".to_string(),
        Periodicity::NotPeriodic(k) => format!("no (degree {k})"),
        Periodicity::NotApplicable => "not applicable (QH(Γ) ≠ 0)".to_string(),
    };
    let mut text = format!("QH*({}) dims {:?} (mod {})\n", a.base().name(), table.dims(), a.n());
    let _ = writeln!(text, "QH(Γ) = 0: {}", yes(gamma.gamma_vanishes()));
    let _ = writeln!(text, "2-periodic: {answer}");
    let betti: Vec<usize> = match &a.data.pearl.betti_hint {
        Some(b) => b.clone(),
        None => {
            let view = View::new(a.base(), Model::Classical);
            let top = a.base().generators().iter().map(|g| g.index).max().unwrap_or(-1);
            (0..=top).map(|k| view.cohomology(k).dim()).collect()
        }
    };
    let narrow = narrowness_obstruction(&betti, a.n());
    let _ = writeln!(
        text,
        "Betti {betti:?}: vanishing in degrees ≡ -1 mod {}: {}",
        a.n(),
        if narrow { "yes, so QH(L) ≠ 0" } else { "no (inconclusive)" }
    );
    let json = json!({
        "dataset": a.base().name(),
        "dims": table.dims(),
        "gamma_vanishes": gamma.gamma_vanishes(),
        "periodicity": verdict,
        "betti": betti,
        "narrowness_criterion": narrow,
    });
    let code = if matches!(verdict, Periodicity::NotPeriodic(_)) { STRUCTURAL } else { OK };
    Ok(Report { text, json, code })
}
