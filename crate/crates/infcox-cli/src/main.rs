use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use infcox::cox::{box_points, enriques_member, enumerate_sections, tropical_closure, SectionIndex};
use infcox::io::{parse_poly, parse_surface_file, parse_vector, poly_to_json, surface_file_to_value, surface_to_file, SurfaceFile, SurfaceSource};
use infcox::keyforms::{classify_surface, key_forms};
use infcox::semidegree::Semidegree;
use infcox::surface::Surface;
use infcox::zariski::{equisingular_compare, is_bpf_at_infinity, semigroup_member_bounded, BpfReport, ComparisonBox, Membership};
use infcox::Error;

const MAX_BOX_POINTS: usize = 250_000;

#[derive(Parser)]
#[command(name = "infcox", version, about = "Key forms, Cox rings and semigroups of compactifications of the affine plane")]
struct Cli {
    /// Worker threads for enumeration.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Largest cyclotomic order a computation may use.
    #[arg(long, global = true)]
    max_cyclotomic: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SurfaceArg {
    /// Surface file.
    #[arg(short = 's', long = "surface")]
    surface: PathBuf,
}

#[derive(Args)]
struct ClassArg {
    #[command(flatten)]
    s: SurfaceArg,
    /// Divisor class, comma-separated.
    #[arg(short = 'd', long = "class", allow_hyphen_values = true)]
    d: String,
}

#[derive(Subcommand)]
enum Command {
    /// Membership in S_num, S_pol and S_pol+.
    Classify(SurfaceArg),
    /// Key forms of every semidegree.
    Keyforms(SurfaceArg),
    /// Values and leading coefficients of a polynomial.
    Delta {
        #[command(flatten)]
        s: SurfaceArg,
        #[arg(short = 'f', long = "poly", allow_hyphen_values = true)]
        f: String,
    },
    /// Dimension of the space of sections.
    Dim(ClassArg),
    /// Basis of the space of sections.
    Basis(ClassArg),
    /// Membership in the Enriques semigroup.
    Enriques(ClassArg),
    /// Base-point-freeness at infinity.
    ZariskiBpf(ClassArg),
    /// Bounded search in the Zariski semigroup at infinity.
    ZariskiMember {
        #[command(flatten)]
        c: ClassArg,
        #[arg(long, default_value_t = 20)]
        bound: i64,
    },
    /// Tropical closure of the generator values against Enriques membership.
    Tropical {
        #[command(flatten)]
        s: SurfaceArg,
        /// Classes range over `0..side` in each coordinate.
        #[arg(long, default_value_t = 20)]
        side: i64,
    },
    /// Compares two equisingular branches.
    CompareEquisingular {
        /// First branch file.
        #[arg(short = 'a', long)]
        first: PathBuf,
        /// Second branch file.
        #[arg(short = 'b', long)]
        second: PathBuf,
        #[arg(long, default_value_t = 15)]
        side: i64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
    },
    /// Surface file with semidegrees and family of a branch.
    FromBranch(SurfaceArg),
}

enum Failure {
    Domain(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type Out = Result<Value, Failure>;

fn load(path: &Path, max: Option<u64>) -> Result<SurfaceFile, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {}", path.display(), e)))?;
    let mut file = parse_surface_file(&text)?;
    if let Some(m) = max {
        let mut cfg = file.config();
        cfg.max_order = m;
        file.field = Some(cfg);
    }
    Ok(file)
}

fn build(path: &Path, max: Option<u64>) -> Result<Surface, Failure> {
    Ok(load(path, max)?.build()?.0)
}

fn semidegrees(file: &SurfaceFile) -> Result<Vec<Semidegree>, Failure> {
    match &file.source {
        SurfaceSource::Semidegrees(s) => Ok(s.clone()),
        SurfaceSource::Branch(_) => Ok(file.build()?.0.semidegrees().to_vec()),
    }
}

fn index_json(surface: &Surface, idx: &SectionIndex) -> Value {
    json!({ "exponents": idx.exponents(), "poly": idx.poly(surface).to_string() })
}

fn bpf_json(r: &BpfReport) -> Value {
    let violated = r.violation.as_ref().map(|v| {
        json!({
            "condition": v.condition.name(),
            "index": v.index.map(|i| i + 1),
            "expected": v.expected,
            "found": v.found,
        })
    });
    json!({ "bpf": r.bpf, "a": r.a, "candidates": r.candidates, "violated": violated })
}

fn run(cli: &Cli) -> Out {
    let max = cli.max_cyclotomic;
    match &cli.command {
        Command::Classify(a) => {
            let file = load(&a.surface, max)?;
            let v = classify_surface(&semidegrees(&file)?, &file.config())?;
            let per: Vec<Value> = v
                .per_semidegree
                .iter()
                .enumerate()
                .map(|(i, c)| json!({ "index": i + 1, "last_keyform_polynomial": c.last_keyform_polynomial, "nonneg": c.nonneg }))
                .collect();
            Ok(json!({ "S_num": v.in_s_num, "S_pol": v.in_s_pol, "S_pol_plus": v.in_s_pol_plus, "semidegrees": per }))
        }
        Command::Keyforms(a) => {
            let file = load(&a.surface, max)?;
            let cfg = file.config();
            let mut out = Vec::new();
            for (i, d) in semidegrees(&file)?.iter().enumerate() {
                let seq = key_forms(d, &cfg)?;
                out.push(json!({
                    "index": i + 1,
                    "semidegree": d.to_string(),
                    "forms": seq.forms.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
                    "values": seq.values,
                    "last_is_polynomial": seq.last_is_polynomial,
                    "delta_of_last": seq.delta_of_last,
                }));
            }
            Ok(json!({ "semidegrees": out }))
        }
        Command::Delta { s, f } => {
            let file = load(&s.surface, max)?;
            let f = parse_poly(f)?;
            let ds = semidegrees(&file)?;
            let mut values = Vec::new();
            let mut lcs = Vec::new();
            for d in &ds {
                let (v, lc) = d.eval_lc(&f)?;
                values.push(v);
                lcs.push(lc.to_string());
            }
            Ok(json!({ "poly": f.to_string(), "terms": poly_to_json(&f), "delta": values, "lc": lcs }))
        }
        Command::Dim(c) => {
            let s = build(&c.s.surface, max)?;
            let d = parse_vector(&c.d)?;
            Ok(json!({ "dim": enumerate_sections(&s, &d)?.dim() }))
        }
        Command::Basis(c) => {
            let s = build(&c.s.surface, max)?;
            let d = parse_vector(&c.d)?;
            let en = enumerate_sections(&s, &d)?;
            let basis: Vec<Value> = en
                .basis
                .iter()
                .map(|((a, b), idx)| {
                    let mut v = index_json(&s, idx);
                    v["a"] = json!(a);
                    v["b"] = json!(b);
                    v
                })
                .collect();
            Ok(json!({ "d": d, "dim": en.dim(), "basis": basis, "maxima": en.maxima }))
        }
        Command::Enriques(c) => {
            let s = build(&c.s.surface, max)?;
            let d = parse_vector(&c.d)?;
            let r = enriques_member(&s, &d)?;
            let w: Vec<Value> = r.witnesses.iter().map(|w| w.as_ref().map_or(Value::Null, |i| index_json(&s, i))).collect();
            Ok(json!({ "d": d, "member": r.member, "maxima": r.maxima, "witnesses": w }))
        }
        Command::ZariskiBpf(c) => {
            let s = build(&c.s.surface, max)?;
            let d = parse_vector(&c.d)?;
            let mut v = bpf_json(&is_bpf_at_infinity(&s, &d)?);
            v["d"] = json!(d);
            Ok(v)
        }
        Command::ZariskiMember { c, bound } => {
            let s = build(&c.s.surface, max)?;
            let d = parse_vector(&c.d)?;
            let (status, cert) = match semigroup_member_bounded(&s, &d, *bound)? {
                Membership::Member(parts) => ("member", json!(parts)),
                Membership::NotWithinBound => ("not-within-bound", Value::Null),
                Membership::Unknown => ("unknown", Value::Null),
            };
            Ok(json!({ "d": d, "bound": bound, "status": status, "certificate": cert }))
        }
        Command::Tropical { s, side } => {
            let surface = build(&s.surface, max)?;
            let n = surface.len();
            if *side <= 0 || (*side as f64).powi(n as i32) > MAX_BOX_POINTS as f64 {
                return Err(Error::BoxInfeasible(format!("side {} in dimension {}", side, n)).into());
            }
            let table = surface.delta_table();
            let mut gens: Vec<Vec<i64>> = (0..table[0].len()).map(|g| table.iter().map(|r| r[g]).collect()).collect();
            gens.push(vec![0; n]);
            gens.sort();
            gens.dedup();
            let lo = vec![0; n];
            let hi = vec![side - 1; n];
            let closure = tropical_closure(&gens, &lo, &hi);
            let mut members = Vec::new();
            for d in box_points(&lo, &hi) {
                if enriques_member(&surface, &d)?.member {
                    members.push(d);
                }
            }
            let closure: Vec<Vec<i64>> = closure.into_iter().collect();
            Ok(json!({
                "generators": gens,
                "lo": lo,
                "hi": hi,
                "closure": closure,
                "enriques": members,
                "agree": closure == members,
            }))
        }
        Command::CompareEquisingular { first, second, side, samples, seed } => {
            let branch = |p: &Path| -> Result<(infcox::series::Dwps, infcox::field::FieldConfig), Failure> {
                let f = load(p, max)?;
                match &f.source {
                    SurfaceSource::Branch(phi) => Ok((phi.clone(), f.config())),
                    SurfaceSource::Semidegrees(_) => Err(Error::NotEquisingular(format!("{} is not a branch file", p.display())).into()),
                }
            };
            let (a, cfg) = branch(first)?;
            let (b, _) = branch(second)?;
            let cmp = ComparisonBox { side: *side, samples: *samples, seed: *seed };
            let r = equisingular_compare(&a, &b, &cmp, &cfg)?;
            let count = |f: &dyn Fn(&infcox::zariski::ComparisonRow) -> bool| r.rows.iter().filter(|x| f(x)).count();
            Ok(json!({
                "curves": r.len,
                "points": r.rows.len(),
                "enriques_members": count(&|x| x.first.enriques),
                "bpf_classes": count(&|x| x.first.bpf),
                "mismatches": r.mismatches,
                "identical": r.mismatches.is_empty(),
            }))
        }
        Command::FromBranch(a) => {
            let file = load(&a.surface, max)?;
            let (surface, data) = file.build()?;
            let mut v = json!({ "surface": surface_file_to_value(&surface_to_file(&surface)) });
            if let Some(d) = data {
                v["one_place"] = json!({
                    "g": d.g.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
                    "g_deg": d.g_deg,
                    "l": d.l,
                    "horizontal": d.trunk.iter().enumerate().filter(|p| *p.1).map(|p| p.0 + 1).collect::<Vec<_>>(),
                    "char_positions": d.j_nodes.iter().map(|k| k + 1).collect::<Vec<_>>(),
                    "segment_ends": d.i_nodes.iter().map(|k| k + 1).collect::<Vec<_>>(),
                });
            }
            Ok(v)
        }
    }
}

fn emit(v: &Value) {
    let _ = writeln!(std::io::stdout().lock(), "{}", v);
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            Ok(pool) => pool.install(|| run(&cli)),
            Err(e) => Err(Failure::Io(e.to_string())),
        },
        None => run(&cli),
    };
    match result {
        Ok(v) => {
            emit(&v);
            ExitCode::SUCCESS
        }
        Err(f) => {
            let (kind, message) = match f {
                Failure::Domain(e) => (e.kind().to_string(), e.to_string()),
                Failure::Io(m) => ("Io".to_string(), m),
            };
            emit(&json!({ "error": { "kind": kind, "message": message } }));
            ExitCode::from(1)
        }
    }
}
