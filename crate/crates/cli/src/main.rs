use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use kirbycalc::category::{validate_target_category, PivotalFunctorData};
use kirbycalc::documents::{parse_category, parse_functor, CategoryDocument};
use kirbycalc::engine::{self, EngineOptions, InvariantRequest, InvariantResult, Theory};
use kirbycalc::group::{count_homs, FiniteGroup, GroupHom};
use kirbycalc::kirby::{parse_kdf, KirbyDiagram};
use kirbycalc::library;
use kirbycalc::pointed::PointedCategory;
use kirbycalc::scalar::{format_complex, format_real, TOLERANCE};
use kirbycalc::templieb::{TemperleyLieb, DEFAULT_SKEIN_CAP};
use kirbycalc::{movesuite, Error, ErrorKind};

#[derive(Parser)]
#[command(name = "kirbycalc", version, about = "Dichromatic invariants of 4-manifolds from Kirby diagrams")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the invariant of one diagram.
    Invariant {
        #[command(flatten)]
        source: DiagramSource,
        #[command(flatten)]
        theory: TheoryArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Evaluate every library entry against its closed form.
    Table {
        #[command(flatten)]
        theory: TheoryArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the randomized handle-move suite.
    CheckMoves {
        #[command(flatten)]
        theory: TheoryArgs,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Print a presentation of the fundamental group and hom counts.
    Pi1 {
        #[command(flatten)]
        source: DiagramSource,
        /// Groups to count homomorphisms into.
        #[arg(long = "group", default_values_t = vec!["s3".to_string()])]
        groups: Vec<String>,
    },
    /// List or export built-in diagrams.
    Library {
        #[command(subcommand)]
        action: LibraryAction,
    },
    /// Validate category, functor and diagram files.
    Validate {
        #[arg(long)]
        category: Option<PathBuf>,
        #[arg(long = "functor-file")]
        functor: Option<PathBuf>,
        #[arg(long)]
        diagram: Option<PathBuf>,
        #[arg(long)]
        library: Option<String>,
    },
}

#[derive(Subcommand)]
enum LibraryAction {
    List,
    Export { name: String },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct DiagramSource {
    /// Name of a built-in diagram.
    #[arg(long)]
    library: Option<String>,
    /// A KDF file.
    #[arg(long)]
    diagram: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Backend {
    Group,
    Pointed,
    Templieb,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Args)]
struct TheoryArgs {
    #[arg(long, value_enum)]
    backend: Option<Backend>,
    /// id, integer-spins, hom, sign-s3 or z4-mod2.
    #[arg(long, default_value = "id")]
    functor: String,
    /// A functor document; overrides the other theory flags.
    #[arg(long = "functor-file")]
    functor_file: Option<PathBuf>,
    /// A target category document.
    #[arg(long)]
    category: Option<PathBuf>,
    /// Cyclic factors of the pointed target.
    #[arg(long, value_delimiter = ',')]
    factors: Vec<u64>,
    /// q(k) = sum k_i^2 / n_i.
    #[arg(long)]
    anyonic: bool,
    /// q(k) = k^2 / den on a cyclic target.
    #[arg(long = "q-den")]
    q_den: Option<u64>,
    /// Cyclic factors of the source of a pointed hom functor.
    #[arg(long = "source-factors", value_delimiter = ',')]
    source_factors: Vec<u64>,
    /// Images of the source generators (pointed, ';'-separated labels) or of
    /// every source element (group, ',' separated).
    #[arg(long)]
    images: Option<String>,
    /// Target group: s3, d4, q8, zN or a group file.
    #[arg(long)]
    group: Option<String>,
    /// Source group of a group hom.
    #[arg(long = "source-group")]
    source_group: Option<String>,
    /// Temperley-Lieb level.
    #[arg(long)]
    r: Option<usize>,
    #[arg(long = "skein-cap", env = "KIRBYCALC_SKEIN_CAP", default_value_t = DEFAULT_SKEIN_CAP)]
    skein_cap: usize,
    #[arg(long, default_value_t = TOLERANCE)]
    tolerance: f64,
    /// Worker threads for labelling sums.
    #[arg(long)]
    jobs: Option<usize>,
}

impl TheoryArgs {
    fn options(&self) -> EngineOptions {
        EngineOptions { tolerance: self.tolerance, skein_cap: self.skein_cap }
    }

    fn theory(&self) -> kirbycalc::Result<Theory> {
        if let Some(path) = &self.functor_file {
            return Ok(Theory::Functor(Arc::new(parse_functor(&read(path)?)?)));
        }
        if let Some(path) = &self.category {
            return match parse_category(&read(path)?)? {
                CategoryDocument::Group(g) => Ok(Theory::DijkgraafWitten(g)),
                doc => self.functor_into(Arc::new(doc.category_data()?), &doc),
            };
        }
        let backend = self.backend.ok_or_else(|| usage("--backend, --category or --functor-file is required"))?;
        match backend {
            Backend::Group => self.group_theory(),
            Backend::Pointed => {
                let target = Arc::new(self.pointed_target()?);
                if self.functor == "hom" {
                    return self.pointed_hom(&target);
                }
                let doc = CategoryDocument::Pointed(target);
                self.functor_into(Arc::new(doc.category_data()?), &doc)
            }
            Backend::Templieb => {
                let r = self.r.ok_or_else(|| usage("--r is required for the templieb backend"))?;
                let doc = CategoryDocument::Templieb { tl: Arc::new(TemperleyLieb::new(r)?), integer_spins: false };
                self.functor_into(Arc::new(doc.category_data()?), &doc)
            }
        }
    }

    fn functor_into(
        &self,
        target: Arc<kirbycalc::category::CategoryData>,
        doc: &CategoryDocument,
    ) -> kirbycalc::Result<Theory> {
        match (self.functor.as_str(), doc) {
            ("id", _) => Ok(Theory::Functor(Arc::new(PivotalFunctorData::identity(target)))),
            ("integer-spins", CategoryDocument::Templieb { tl, .. }) => {
                Ok(Theory::Functor(Arc::new(tl.integer_spin_inclusion()?)))
            }
            ("hom", CategoryDocument::Pointed(p)) => self.pointed_hom(p),
            (other, _) => Err(usage(&format!("functor '{other}' does not apply to this target"))),
        }
    }

    fn pointed_target(&self) -> kirbycalc::Result<PointedCategory> {
        if self.factors.is_empty() {
            return Err(usage("--factors is required for the pointed backend"));
        }
        match (self.anyonic, self.q_den) {
            (true, None) => PointedCategory::anyonic(self.factors.clone()),
            (false, Some(den)) if self.factors.len() == 1 => PointedCategory::cyclic_with_form(self.factors[0], den),
            (false, Some(_)) => Err(usage("--q-den needs a single cyclic factor")),
            (false, None) => PointedCategory::trivial(self.factors.clone()),
            (true, Some(_)) => Err(usage("give either --anyonic or --q-den")),
        }
    }

    fn pointed_hom(&self, target: &Arc<PointedCategory>) -> kirbycalc::Result<Theory> {
        let factors = if self.source_factors.is_empty() { target.group().factors().to_vec() } else { self.source_factors.clone() };
        let source = Arc::new(PointedCategory::trivial(factors)?);
        let images = match &self.images {
            Some(s) => s.split(';').map(|l| target.group().parse(l.trim())).collect::<kirbycalc::Result<Vec<_>>>()?,
            None => return Err(usage("--images is required for a hom functor")),
        };
        Ok(Theory::Functor(Arc::new(PointedCategory::hom_functor("hom", &source, target, &images)?)))
    }

    fn group_theory(&self) -> kirbycalc::Result<Theory> {
        match self.functor.as_str() {
            "sign-s3" => return Ok(Theory::GroupPullback(GroupHom::sign_s3())),
            "z4-mod2" => return Ok(Theory::GroupPullback(GroupHom::z4_mod2())),
            _ => {}
        }
        let target = load_group(self.group.as_deref().ok_or_else(|| usage("--group is required"))?)?;
        match self.functor.as_str() {
            "id" => Ok(Theory::DijkgraafWitten(target)),
            "hom" => {
                let source = load_group(self.source_group.as_deref().ok_or_else(|| usage("--source-group is required"))?)?;
                let map = self
                    .images
                    .as_deref()
                    .ok_or_else(|| usage("--images is required for a hom"))?
                    .split(',')
                    .map(|s| s.trim().parse::<usize>().map_err(|e| Error::Schema(format!("image '{s}': {e}"))))
                    .collect::<kirbycalc::Result<Vec<_>>>()?;
                Ok(Theory::GroupPullback(GroupHom::new("hom", source, target, map)?))
            }
            other => Err(usage(&format!("functor '{other}' does not apply to the group backend"))),
        }
    }
}

fn usage(msg: &str) -> Error {
    Error::Schema(msg.to_string())
}

fn read(path: &PathBuf) -> kirbycalc::Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Schema(format!("{}: {e}", path.display())))
}

fn load_group(spec: &str) -> kirbycalc::Result<FiniteGroup> {
    match FiniteGroup::builtin(spec) {
        Ok(g) => Ok(g),
        Err(_) if std::path::Path::new(spec).exists() => FiniteGroup::from_json(spec, &read(&PathBuf::from(spec))?),
        Err(e) => Err(e),
    }
}

fn load_diagram(source: &DiagramSource) -> kirbycalc::Result<KirbyDiagram> {
    match (&source.library, &source.diagram) {
        (Some(name), _) => Ok(library::get(name)?.diagram),
        (_, Some(path)) => parse_kdf(&read(path)?),
        _ => Err(usage("one of --library or --diagram is required")),
    }
}

fn pair(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn print_invariant(r: &InvariantResult, format: Format) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&r.to_json()).expect("json")),
        Format::Csv => {
            println!("diagram,backend,functor,h1,h2,chi,sigma,value_re,value_im");
            println!(
                "{},{},{},{},{},{},{},{},{}",
                r.diagram,
                r.backend,
                csv_field(&r.functor),
                r.h1,
                r.h2,
                r.chi,
                r.sigma,
                format_real(r.value.re),
                format_real(r.value.im)
            );
        }
        Format::Table => {
            println!("diagram        {}", r.diagram);
            println!("backend        {}", r.backend);
            println!("functor        {}", r.functor);
            println!("handles        h1={} h2={}", r.h1, r.h2);
            println!("chi, sigma     {}, {}", r.chi, r.sigma);
            println!("numerator      {}", format_complex(r.numerator));
            println!("normalization  {}", format_complex(r.normalization));
            println!("value          {}", r.value_string());
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn cmd_table(theory: &Theory, options: &EngineOptions, format: Format) -> kirbycalc::Result<()> {
    let k = engine::category_constants(theory, options).ok();
    let entries = library::all();
    let rows: Vec<Value> = entries
        .iter()
        .map(|e| {
            let req = InvariantRequest::new(theory.clone(), e.diagram.clone()).with_options(*options);
            let expected = match (k, e.expected) {
                (Some(k), Some(form)) => Some(form.evaluate(&k)),
                _ => None,
            };
            let mut row = json!({"manifold": e.name, "chi": e.chi, "sigma": e.sigma});
            match engine::invariant(&req) {
                Ok(r) => {
                    row["value"] = pair(r.value);
                    row["display"] = json!(r.value_string());
                    if let Some(x) = expected {
                        row["match"] = json!(kirbycalc::scalar::approx_eq(r.value, x, options.tolerance));
                    }
                }
                Err(err) => row["error"] = error_json(&err),
            }
            if let Some(x) = expected {
                row["expected"] = pair(x);
            }
            row
        })
        .collect();
    match format {
        Format::Json => {
            let doc = json!({"theory": theory.describe(), "backend": theory.backend(), "rows": rows});
            println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
        }
        Format::Csv => {
            println!("manifold,chi,sigma,value_re,value_im,expected_re,expected_im,match");
            for row in &rows {
                println!(
                    "{},{},{},{},{},{},{},{}",
                    row["manifold"].as_str().unwrap_or_default(),
                    row["chi"],
                    row["sigma"],
                    real_at(row, "value", 0),
                    real_at(row, "value", 1),
                    real_at(row, "expected", 0),
                    real_at(row, "expected", 1),
                    cell(row),
                );
            }
        }
        Format::Table => {
            println!("{}", theory.describe());
            println!("{:<20} {:>4} {:>6}  {:<28} {:<28} {}", "manifold", "chi", "sigma", "value", "expected", "match");
            for row in &rows {
                let value = match row.get("display") {
                    Some(d) => d.as_str().unwrap_or_default().to_string(),
                    None => row["error"]["error"].as_str().unwrap_or_default().to_string(),
                };
                let expected = row
                    .get("expected")
                    .map(|e| format_complex(Complex64::new(e[0].as_f64().unwrap_or(0.0), e[1].as_f64().unwrap_or(0.0))))
                    .unwrap_or_else(|| "-".into());
                println!(
                    "{:<20} {:>4} {:>6}  {:<28} {:<28} {}",
                    row["manifold"].as_str().unwrap_or_default(),
                    row["chi"].as_i64().unwrap_or_default(),
                    row["sigma"].as_i64().unwrap_or_default(),
                    value,
                    expected,
                    cell(row)
                );
            }
        }
    }
    Ok(())
}

fn real_at(row: &Value, key: &str, i: usize) -> String {
    row.get(key).and_then(|v| v[i].as_f64()).map(format_real).unwrap_or_default()
}

fn cell(row: &Value) -> String {
    match row.get("match").and_then(Value::as_bool) {
        Some(true) => "yes".into(),
        Some(false) => "NO".into(),
        None if row.get("error").is_some() => "error".into(),
        None => "-".into(),
    }
}

fn cmd_check_moves(theory: &Theory, options: &EngineOptions, trials: usize, seed: u64, format: Format) -> kirbycalc::Result<bool> {
    let report = movesuite::run(theory, trials, seed, options)?;
    let worst = report.worst();
    let ok = worst <= options.tolerance;
    match format {
        Format::Json => {
            let doc = json!({
                "theory": theory.describe(),
                "trials": report.trials,
                "seed": seed,
                "checks": report.checks,
                "max_deviation": report.max_deviation,
                "worst": worst,
                "pass": ok,
            });
            println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
        }
        Format::Csv => {
            println!("move,checks,max_deviation");
            for (m, n) in &report.checks {
                println!("{m},{n},{:e}", report.max_deviation.get(m).copied().unwrap_or(0.0));
            }
        }
        Format::Table => {
            println!("{} : {} trials, seed {}", theory.describe(), report.trials, seed);
            for (m, n) in &report.checks {
                println!("{:<12} {:>5} checks  max deviation {:e}", m, n, report.max_deviation.get(m).copied().unwrap_or(0.0));
            }
            println!("{}", if ok { "PASS" } else { "FAIL" });
        }
    }
    Ok(ok)
}

fn cmd_pi1(diagram: &KirbyDiagram, groups: &[String]) -> kirbycalc::Result<()> {
    let p = diagram.fundamental_group();
    println!("{p}");
    for name in groups {
        let g = load_group(name)?;
        println!("homs to {}: {}", g.name(), count_homs(&p, &g));
    }
    Ok(())
}

fn cmd_validate(
    category: Option<&PathBuf>,
    functor: Option<&PathBuf>,
    diagram: Option<&PathBuf>,
    library_name: Option<&str>,
) -> kirbycalc::Result<bool> {
    let mut reports = serde_json::Map::new();
    let mut ok = true;
    if let Some(path) = category {
        match parse_category(&read(path)?)? {
            CategoryDocument::Group(g) => {
                reports.insert("category".into(), json!({"group": g.name(), "order": g.order(), "valid": true}));
            }
            doc => {
                let report = validate_target_category(&doc.category_data()?);
                ok &= report.is_valid();
                reports.insert(
                    "category".into(),
                    json!({
                        "category": report.category,
                        "valid": report.is_valid(),
                        "modular": report.modular,
                        "transparent": report.transparent,
                        "violations": report.violations,
                    }),
                );
            }
        }
    }
    if let Some(path) = functor {
        let f = parse_functor(&read(path)?)?;
        reports.insert(
            "functor".into(),
            json!({"functor": f.name(), "source": f.source().name(), "target": f.target().name(), "valid": true}),
        );
    }
    let d = match (diagram, library_name) {
        (Some(path), _) => Some(parse_kdf(&read(path)?)?),
        (None, Some(name)) => Some(library::get(name)?.diagram),
        _ => None,
    };
    if let Some(d) = d {
        reports.insert(
            "diagram".into(),
            json!({
                "diagram": d.name(),
                "valid": true,
                "h1": d.h1(),
                "h2": d.h2(),
                "h3": d.h3(),
                "chi": d.euler_characteristic(),
                "sigma": d.signature(),
                "pd": d.pd().is_some(),
                "pi1": d.fundamental_group().to_string(),
            }),
        );
    }
    if reports.is_empty() {
        return Err(usage("nothing to validate"));
    }
    println!("{}", serde_json::to_string_pretty(&Value::Object(reports)).expect("json"));
    Ok(ok)
}

fn error_json(e: &Error) -> Value {
    let mut v = json!({"error": e.tag(), "message": e.to_string()});
    if let Error::ResourceLimit { needed, cap } = e {
        v["needed"] = json!(needed);
        v["cap"] = json!(cap);
    }
    v
}

fn set_jobs(theory: &TheoryArgs) {
    if let Some(n) = theory.jobs {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn run(cli: Cli) -> kirbycalc::Result<u8> {
    match cli.command {
        Command::Invariant { source, theory, output } => {
            set_jobs(&theory);
            let req = InvariantRequest::new(theory.theory()?, load_diagram(&source)?).with_options(theory.options());
            print_invariant(&engine::invariant(&req)?, output.format);
            Ok(0)
        }
        Command::Table { theory, output } => {
            set_jobs(&theory);
            cmd_table(&theory.theory()?, &theory.options(), output.format)?;
            Ok(0)
        }
        Command::CheckMoves { theory, trials, seed, output } => {
            set_jobs(&theory);
            let ok = cmd_check_moves(&theory.theory()?, &theory.options(), trials, seed, output.format)?;
            Ok(if ok { 0 } else { 1 })
        }
        Command::Pi1 { source, groups } => {
            cmd_pi1(&load_diagram(&source)?, &groups)?;
            Ok(0)
        }
        Command::Library { action } => {
            match action {
                LibraryAction::List => {
                    for e in library::all() {
                        println!("{:<20} chi={:<3} sigma={:<3} pi1={}", e.name, e.chi, e.sigma, e.pi1);
                    }
                }
                LibraryAction::Export { name } => print!("{}", library::export(&name)?),
            }
            Ok(0)
        }
        Command::Validate { category, functor, diagram, library } => {
            let ok = cmd_validate(category.as_ref(), functor.as_ref(), diagram.as_ref(), library.as_deref())?;
            Ok(if ok { 0 } else { 2 })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("{}", error_json(&e));
            match e.kind() {
                ErrorKind::Resource => ExitCode::from(3),
                ErrorKind::Validation => ExitCode::from(2),
            }
        }
    }
}
