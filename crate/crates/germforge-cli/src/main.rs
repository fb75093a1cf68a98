//! Command-line surface of the germforge kernel.
//!
//! Every subcommand prints a human-readable report on stdout, or one
//! machine-readable JSON document (schema 1) with `--json`. Exit codes:
//! `1` parse error, `2` certification/solver failure, `3` infinite
//! codimension where finiteness is required, `4` numeric budget exhausted.

mod render;

use clap::{Parser, Subcommand, ValueEnum};
use germforge::division::{IdealBasis, Ring};
use germforge::error::Error;
use germforge::germ::{parse_germ, parse_unfolding, GermExpression};
use germforge::ideal::{colon_ideal, mult_matrix, normal_set, verify_truncation};
use germforge::intrinsic::intrinsic_decomposition;
use germforge::jet::taylor_jet;
use germforge::json as gj;
use germforge::monomial::Monomial;
use germforge::order::MonomialOrder;
use germforge::poly::Polynomial;
use germforge::singularity::{
    algebraic_objects, contact_residual, normal_form, recognition_conditions,
    transformation_solve, SingularGerm,
};
use germforge::transition::{persistent_diagrams, region_decompose, transition_set};
use germforge::unfolding::{codimension, universal_unfolding, Unfolding};
use germforge::vars::{Var, VarList};
use germforge::{basis, svg};
use serde_json::{Map, Value};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "germforge",
    version,
    about = "Exact local bifurcation analysis of scalar smooth germs g(x, lambda)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Print one machine-readable JSON document instead of the report.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RingChoice {
    /// Truncated local jet ring K[x,lambda]/M^(N+1), anti-graded order.
    Jet,
    /// Global polynomial ring, lexicographic order.
    Poly,
}

#[derive(Subcommand)]
enum Command {
    /// Certify a faithful truncation degree and ring for an ideal.
    Verify {
        /// Ideal generators (germ expressions).
        gens: Vec<String>,
        /// Degree to start the certification search from.
        #[arg(long, default_value_t = 1)]
        degree: u32,
    },
    /// Reduced standard basis (jet ring) or Groebner basis (poly ring).
    StandardBasis {
        gens: Vec<String>,
        #[arg(long, value_enum, default_value_t = RingChoice::Jet)]
        ring: RingChoice,
        /// Jet truncation degree; certified automatically when omitted.
        #[arg(long)]
        degree: Option<u32>,
    },
    /// Divide a germ by ideal generators: f = sum(q_i g_i) + remainder.
    Division {
        f: String,
        gens: Vec<String>,
        #[arg(long, value_enum, default_value_t = RingChoice::Jet)]
        ring: RingChoice,
        #[arg(long)]
        degree: Option<u32>,
    },
    /// Colon ideal (I : m) for a monomial m.
    ColonIdeal {
        gens: Vec<String>,
        /// The monomial divisor, e.g. "lambda^2".
        #[arg(long)]
        by: String,
        #[arg(long)]
        degree: Option<u32>,
    },
    /// Multiplication matrix of a variable on the quotient algebra.
    MultMatrix {
        gens: Vec<String>,
        /// Which variable to multiply by: x or lambda.
        #[arg(long, default_value = "x")]
        var: String,
        #[arg(long)]
        degree: Option<u32>,
    },
    /// Monomial basis of the quotient ring (the staircase complement).
    NormalSet {
        gens: Vec<String>,
        #[arg(long)]
        degree: Option<u32>,
    },
    /// Intrinsic part of an ideal, with the complement of the decomposition.
    Intrinsic {
        gens: Vec<String>,
        #[arg(long)]
        degree: Option<u32>,
    },
    /// All algebraic objects of a singular germ (P, S, A, RT, T, E/T).
    AlgObjects { germ: String },
    /// Contact-equivalence normal form of a singular germ.
    NormalForm {
        germ: String,
        /// Jet degree of the reported normal form.
        #[arg(long)]
        degree: Option<u32>,
    },
    /// Universal unfolding and codimension of a singular germ.
    UniversalUnfolding { germ: String },
    /// Zero/nonzero coefficient conditions recognizing a normal form.
    Recognition {
        /// A polynomial normal form in x and lambda.
        normal_form: String,
    },
    /// Solve g = S * f(X, lambda) for the transformation (X, S).
    Transformation {
        g: String,
        f: String,
        /// Jet degree the equivalence is certified to.
        #[arg(long, default_value_t = 5)]
        degree: u32,
    },
    /// Transition set (bifurcation, hysteresis, double-limit) of a family.
    TransitionSet {
        /// Parametric family G(x, lambda, alpha1, ...).
        family: String,
        /// Write a plot here (two-parameter families only).
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Parameter box lower bound.
        #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
        lo: f64,
        /// Parameter box upper bound.
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        hi: f64,
    },
    /// Persistent bifurcation diagrams over the regions cut by the
    /// transition set.
    PersistentDiagrams {
        family: String,
        #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
        lo: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        hi: f64,
        /// Cells per parameter axis for the region decomposition.
        #[arg(long, default_value_t = 96)]
        grid: usize,
        /// Lambda slices per diagram.
        #[arg(long, default_value_t = 100)]
        steps: usize,
        /// Directory to write one diagram plot per region into.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // Help and version are not errors; everything else is a parse
            // failure under this tool's exit-code contract.
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                std::process::exit(0);
            }
            eprint!("{e}");
            std::process::exit(1);
        }
    };
    let want_json = cli.json;
    match run(cli.command) {
        Ok(out) => {
            // Tolerate a closed stdout (e.g. piping into `head`).
            use std::io::Write;
            let text = if want_json {
                format!("{}\n", gj::to_string(&out.json))
            } else {
                out.report
            };
            let _ = std::io::stdout().write_all(text.as_bytes());
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(exit_code(&e));
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Syntax { .. }
        | Error::NonRationalLiteral { .. }
        | Error::Invalid(_)
        | Error::VariableMismatch(_) => 1,
        Error::Certification(_) | Error::Unsolvable(_) => 2,
        Error::InfiniteCodimension(_) | Error::StaircaseEscapes { .. } => 3,
        Error::Budget(_) | Error::Numeric(_) => 4,
    }
}

/// Everything a subcommand produces: a JSON document and a plain report.
struct Output {
    json: Value,
    report: String,
}

fn document(kind: &str, fields: Vec<(&str, Value)>) -> Value {
    let mut body = Map::new();
    for (k, v) in fields {
        body.insert(k.to_string(), v);
    }
    gj::document(kind, body)
}

/// Parse ideal generators and build a working basis in the requested ring.
/// In the jet ring the truncation degree is certified when not supplied.
fn build_basis(
    gens: &[String],
    ring: RingChoice,
    degree: Option<u32>,
) -> Result<(IdealBasis, Vec<GermExpression>), Error> {
    if gens.is_empty() {
        return Err(Error::invalid("at least one generator is required"));
    }
    let exprs: Vec<GermExpression> = gens
        .iter()
        .map(|g| parse_germ(g))
        .collect::<Result<_, _>>()?;
    let vars = VarList::xl();
    match ring {
        RingChoice::Poly => {
            let polys: Vec<Polynomial> = exprs
                .iter()
                .map(|e| e.to_polynomial(&vars))
                .collect::<Result<_, _>>()?;
            Ok((
                IdealBasis::new(polys, MonomialOrder::LexGlobal, Ring::GlobalPoly),
                exprs,
            ))
        }
        RingChoice::Jet => {
            let n = match degree {
                Some(n) => n,
                None => verify_truncation(&exprs, 1)?.degree,
            };
            let polys: Vec<Polynomial> = exprs
                .iter()
                .map(|e| taylor_jet(e, n).map(|j| j.poly().clone()))
                .collect::<Result<_, _>>()?;
            Ok((
                IdealBasis::new(polys, MonomialOrder::AlexLocal, Ring::LocalJet(n)),
                exprs,
            ))
        }
    }
}

fn parse_monomial(src: &str) -> Result<Monomial, Error> {
    let p = parse_germ(src)?.to_polynomial(&VarList::xl())?;
    match (p.num_terms(), p.terms().first()) {
        (1, Some(t)) if t.coef == germforge::int(1) => Ok(t.mono.clone()),
        _ => Err(Error::invalid(format!("{src:?} is not a monomial"))),
    }
}

fn parse_family(src: &str) -> Result<Unfolding, Error> {
    let expr = parse_unfolding(src)?;
    let mut k = 0u8;
    for v in expr.variables() {
        if let Var::Alpha(i) = v {
            k = k.max(i);
        }
    }
    let poly = expr.to_polynomial(&VarList::unfolding(k))?;
    Unfolding::from_polynomial(&poly)
}

fn singular_germ(src: &str) -> Result<SingularGerm, Error> {
    SingularGerm::new(parse_germ(src)?, 1)
}

fn run(cmd: Command) -> Result<Output, Error> {
    match cmd {
        Command::Verify { gens, degree } => {
            if gens.is_empty() {
                return Err(Error::invalid("at least one generator is required"));
            }
            let exprs: Vec<GermExpression> = gens
                .iter()
                .map(|g| parse_germ(g))
                .collect::<Result<_, _>>()?;
            let cert = verify_truncation(&exprs, degree)?;
            Ok(render::verify_output(&cert))
        }
        Command::StandardBasis { gens, ring, degree } => {
            let (input, _) = build_basis(&gens, ring, degree)?;
            let comp = basis::reduce_basis(&input);
            Ok(render::basis_output(&comp, &input))
        }
        Command::Division {
            f,
            gens,
            ring,
            degree,
        } => {
            let (input, _) = build_basis(&gens, ring, degree)?;
            let fe = parse_germ(&f)?;
            let fp = match input.ring {
                Ring::LocalJet(n) => taylor_jet(&fe, n)?.poly().clone(),
                Ring::GlobalPoly => fe.to_polynomial(&VarList::xl())?,
            };
            let div = germforge::division::divide(&fp, &input);
            Ok(render::division_output(&fp, &div, &input))
        }
        Command::ColonIdeal { gens, by, degree } => {
            let (input, _) = build_basis(&gens, RingChoice::Jet, degree)?;
            let m = parse_monomial(&by)?;
            let quot = colon_ideal(&input, &m)?;
            Ok(render::colon_output(&m, &quot))
        }
        Command::MultMatrix { gens, var, degree } => {
            let u = gj::var_from_name(&var)?;
            let (input, _) = build_basis(&gens, RingChoice::Jet, degree)?;
            let mm = mult_matrix(&input, u)?;
            Ok(render::mult_matrix_output(&mm))
        }
        Command::NormalSet { gens, degree } => {
            let (input, _) = build_basis(&gens, RingChoice::Jet, degree)?;
            let q = normal_set(&input)?;
            Ok(render::normal_set_output(&q))
        }
        Command::Intrinsic { gens, degree } => {
            let (input, _) = build_basis(&gens, RingChoice::Jet, degree)?;
            let dec = intrinsic_decomposition(&input)?;
            Ok(render::intrinsic_output(&dec))
        }
        Command::AlgObjects { germ } => {
            let g = singular_germ(&germ)?;
            let objs = algebraic_objects(&g, true)?;
            Ok(render::alg_objects_output(&objs))
        }
        Command::NormalForm { germ, degree } => {
            let g = singular_germ(&germ)?;
            let n = degree.unwrap_or_else(|| g.degree());
            let nf = normal_form(&g, n)?;
            Ok(render::normal_form_output(&nf, n))
        }
        Command::UniversalUnfolding { germ } => {
            let g = singular_germ(&germ)?;
            let u = universal_unfolding(&g)?;
            let codim = codimension(&g)?;
            Ok(render::unfolding_output(&u, codim))
        }
        Command::Recognition { normal_form } => {
            let nf = parse_germ(&normal_form)?.to_polynomial(&VarList::xl())?;
            let rec = recognition_conditions(&nf)?;
            Ok(render::recognition_output(&nf, &rec))
        }
        Command::Transformation { g, f, degree } => {
            let gp = taylor_jet(&parse_germ(&g)?, degree)?.poly().clone();
            let fp = taylor_jet(&parse_germ(&f)?, degree)?.poly().clone();
            let tr = transformation_solve(&gp, &fp, degree)?;
            let residual = contact_residual(&gp, &fp, &tr.x, &tr.s, degree);
            if !residual.is_zero() {
                return Err(Error::Unsolvable(format!(
                    "residual J^{degree}(g - S*f(X)) = {residual} is nonzero"
                )));
            }
            Ok(render::transformation_output(&tr))
        }
        Command::TransitionSet { family, svg, lo, hi } => {
            let u = parse_family(&family)?;
            let t = transition_set(&u)?;
            let mut out = render::transition_output(&t);
            if let Some(path) = svg {
                if u.directions.len() == 2 {
                    std::fs::write(&path, svg::transition_svg(&t, lo, hi)?)
                        .map_err(|e| Error::invalid(format!("cannot write {path:?}: {e}")))?;
                    out.report.push_str(&format!("plot written to {}\n", path.display()));
                } else {
                    eprintln!(
                        "note: {}-parameter transition sets have no plot; use --json",
                        u.directions.len()
                    );
                }
            }
            Ok(out)
        }
        Command::PersistentDiagrams {
            family,
            lo,
            hi,
            grid,
            steps,
            svg: svg_dir,
        } => {
            let u = parse_family(&family)?;
            let t = transition_set(&u)?;
            let k = u.directions.len();
            let dec = region_decompose(&t, &vec![lo; k], &vec![hi; k], grid)?;
            let pd = persistent_diagrams(&u, &dec, -1.0, 1.0, steps)?;
            if let Some(dir) = &svg_dir {
                std::fs::create_dir_all(dir)
                    .map_err(|e| Error::invalid(format!("cannot create {dir:?}: {e}")))?;
                for (id, d) in &pd.per_region {
                    let path = dir.join(format!("region-{id}.svg"));
                    std::fs::write(&path, svg::diagram_svg(d))
                        .map_err(|e| Error::invalid(format!("cannot write {path:?}: {e}")))?;
                }
            }
            Ok(render::persistent_output(&dec, &pd, svg_dir.as_deref()))
        }
    }
}
