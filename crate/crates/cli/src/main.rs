//! Command-line front end: spec ingestion, dispatch, tables and
//! machine-readable reports.
//!
//! Exit codes: 0 on success, 2 on mathematical-failure reports (a nonzero
//! obstruction under `--expect-zero`, a failed fan or Segre decomposition, a
//! master-identity or Jacobi residual), 1 on usage and i/o errors.

mod report;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sha2::{Digest, Sha256};

use rhodef::complex::{assemble_controlling, BigradedComplex};
use rhodef::derivation::Derivation;
use rhodef::gauge::{self, DerPoly, OrbitFamily};
use rhodef::lie::LieElement;
use rhodef::mcideal::{self, McIdeal, NamedDerivation};
use rhodef::miniversal;
use rhodef::poly::Monomial;
use rhodef::quillen::{build_model, QuillenModel};
use rhodef::scalar::{self, Scalar};
use rhodef::specfile;

use report::*;

const ENGINE: &str = "rhodef";
const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(name = "rhodef", version, about = "Exact deformation theory of rational homotopy types")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Cohomology spec file.
    #[arg(long)]
    spec: PathBuf,
    /// Output format.
    #[arg(long, default_value = "table")]
    format: Format,
    /// Weight truncation: blocks with weight in [weight_min, -1] are
    /// assembled.
    #[arg(long, default_value_t = -6, allow_negative_numbers = true)]
    weight_min: i64,
    /// Degrees to assemble, comma separated (commands extend this to what
    /// they need).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    degrees: Option<Vec<i64>>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum Format {
    Table,
    Machine,
}

#[derive(Subcommand)]
enum Command {
    /// Build and print the Quillen model of the spec.
    Quillen {
        #[command(flatten)]
        common: Common,
    },
    /// Exact cohomology of the controlling algebra in one degree.
    Cohomology {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_negative_numbers = true)]
        degree: i64,
        /// Restrict to one weight (default: all assembled weights).
        #[arg(long, allow_negative_numbers = true)]
        weight: Option<i64>,
    },
    /// Generators of the Maurer-Cartan ideal.
    #[command(name = "mc-ideal")]
    McIdeal {
        #[command(flatten)]
        common: Common,
        /// Named degree-1 basis file (default: canonical block basis).
        #[arg(long)]
        basis: Option<PathBuf>,
    },
    /// Least power of a coordinate monomial lying in the ideal.
    Nilpotent {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        basis: Option<PathBuf>,
        /// Monomial in coordinate names, e.g. `a11*b212`.
        #[arg(long)]
        monomial: String,
        #[arg(long, default_value_t = 4)]
        max_power: u32,
    },
    /// Class of dθ + ½[θ,θ] in H².
    Obstruction {
        #[command(flatten)]
        common: Common,
        /// Derivation file for θ.
        #[arg(long)]
        theta: PathBuf,
        /// Exit with code 2 if the class is nonzero.
        #[arg(long)]
        expect_zero: bool,
    },
    /// Verify the fan decomposition W_red = A ∨ B.
    Fan {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        basis: Option<PathBuf>,
        #[arg(long, default_value_t = 4)]
        max_power: u32,
    },
    /// The Segre-minor component of the ideal for the
    /// ∨^r S^k ∨ S^(3k-1) ∨ S^(6k-3) family.
    Segre {
        #[command(flatten)]
        common: Common,
    },
    /// Integrate the gauge flow driven by ζ(t) from η(0) = p.
    Gauge {
        #[command(flatten)]
        common: Common,
        /// Derivation file for the initial point p (degree 1).
        #[arg(long)]
        p: PathBuf,
        /// Derivation file for ζ(t) (degree 0, may carry `t^k *` factors).
        #[arg(long)]
        zeta: PathBuf,
        /// Also evaluate η at this rational time.
        #[arg(long)]
        at: Option<String>,
    },
    /// Normal-form label of a point in a supported orbit family.
    Orbit {
        #[command(flatten)]
        common: Common,
        /// `quadratic2` (q11,q12,q22) or `bilinear2` (m11,m12,m21,m22).
        #[arg(long)]
        family: String,
        /// Comma-separated rational coordinates.
        #[arg(long)]
        point: String,
    },
    /// Transferred minimal structure and the miniversal ideal in tangent
    /// coordinates.
    Miniversal {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 4)]
        cutoff: u32,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

struct Ctx {
    common: Common,
    model: QuillenModel,
    digest: String,
    report: Report,
    lines: Vec<String>,
}

impl Ctx {
    fn new(common: &Common, command: &str) -> Result<Ctx, rhodef::Error> {
        let bytes = std::fs::read(&common.spec)?;
        let digest = {
            let hash = Sha256::digest(&bytes);
            let hex: String = hash.iter().map(|b| format!("{b:02x}")).collect();
            format!("sha256:{hex}")
        };
        let text = String::from_utf8_lossy(&bytes).to_string();
        let spec = specfile::parse_spec(&text)?;
        let model = build_model(&spec)?;
        let report = Report {
            engine: ENGINE,
            version: VERSION,
            command: command.to_string(),
            spec: SpecInfo {
                name: spec.name.clone(),
                digest: digest.clone(),
                classes: spec.classes.clone(),
            },
            params: Params {
                weight_min: common.weight_min,
                degrees: Vec::new(),
                cutoff: None,
                max_power: None,
            },
            blocks: None,
            generators: None,
            ideal: None,
            certificates: None,
            cohomology: None,
            obstruction: None,
            fan: None,
            segre: None,
            gauge: None,
            orbits: None,
            miniversal: None,
        };
        Ok(Ctx { common: common.clone(), model, digest: digest.clone(), lines: Vec::new(), report })
    }

    fn assemble(&mut self, default_degrees: &[i64]) -> Result<BigradedComplex, rhodef::Error> {
        let degrees = self.common.degrees.clone().unwrap_or_else(|| default_degrees.to_vec());
        self.report.params.degrees = degrees.clone();
        assemble_controlling(&self.model, &degrees, self.common.weight_min)
    }

    fn say(&mut self, line: impl Into<String>) {
        self.lines.push(line.into());
    }

    fn finish(self, exit: u8) -> Result<ExitCode, rhodef::Error> {
        let _ = &self.digest;
        let text = match self.common.format {
            Format::Table => self.lines.join("\n") + "\n",
            Format::Machine => {
                serde_json::to_string_pretty(&self.report).expect("report serializes") + "\n"
            }
        };
        match &self.common.out {
            None => print!("{text}"),
            Some(path) => std::fs::write(path, text)?,
        }
        Ok(ExitCode::from(exit))
    }
}

fn run(cli: Cli) -> Result<ExitCode, rhodef::Error> {
    match cli.command {
        Command::Quillen { common } => cmd_quillen(common),
        Command::Cohomology { common, degree, weight } => cmd_cohomology(common, degree, weight),
        Command::McIdeal { common, basis } => cmd_mc_ideal(common, basis),
        Command::Nilpotent { common, basis, monomial, max_power } => {
            cmd_nilpotent(common, basis, monomial, max_power)
        }
        Command::Obstruction { common, theta, expect_zero } => {
            cmd_obstruction(common, theta, expect_zero)
        }
        Command::Fan { common, basis, max_power } => cmd_fan(common, basis, max_power),
        Command::Segre { common } => cmd_segre(common),
        Command::Gauge { common, p, zeta, at } => cmd_gauge(common, p, zeta, at),
        Command::Orbit { common, family, point } => cmd_orbit(common, family, point),
        Command::Miniversal { common, cutoff } => cmd_miniversal(common, cutoff),
    }
}

/// The canonical degree-1 basis with synthetic names `g1, g2, ...`.
fn canonical_basis(cx: &BigradedComplex) -> Result<Vec<NamedDerivation>, rhodef::Error> {
    let mut out = Vec::new();
    for w in cx.weight_min..=-1 {
        if let Ok(block) = cx.block(1, w) {
            for elem in block.basis.clone() {
                let der = Derivation::single(
                    elem.target,
                    LieElement::from_basis_word(cx.table().clone(), elem.word.clone()),
                )?;
                out.push(NamedDerivation { name: format!("g{}", out.len() + 1), der });
            }
        }
    }
    Ok(out)
}

fn load_basis(
    ctx: &Ctx,
    cx: &BigradedComplex,
    basis: &Option<PathBuf>,
) -> Result<Vec<NamedDerivation>, rhodef::Error> {
    match basis {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            specfile::parse_basis_file(&ctx.model, &text)
        }
        None => canonical_basis(cx),
    }
}

fn coord_infos(ideal: &McIdeal, cx: &BigradedComplex, basis: &[NamedDerivation]) -> Vec<CoordInfo> {
    ideal
        .coords
        .coords
        .iter()
        .enumerate()
        .map(|(i, c)| CoordInfo {
            name: c.name.clone(),
            content: c.content.clone(),
            weight: c.weight,
            meaning: basis.get(i).map(|nd| {
                let _ = cx;
                format!("{}", nd.der)
            }),
        })
        .collect()
}

fn generator_infos(ideal: &McIdeal) -> Vec<GeneratorInfo> {
    ideal
        .generators
        .iter()
        .map(|g| GeneratorInfo {
            label: g.label.clone(),
            weight: g.weight,
            content: g.poly.homogeneous_content().unwrap_or_default(),
            polynomial: g.poly.to_string(),
        })
        .collect()
}

fn cmd_quillen(common: Common) -> Result<ExitCode, rhodef::Error> {
    let mut ctx = Ctx::new(&common, "quillen")?;
    ctx.report.params.degrees = Vec::new();
    ctx.say(format!("spec {} ({})", ctx.model.spec.name, ctx.digest));
    ctx.say("generators (name, degree, weight):");
    let rows: Vec<String> = ctx
        .model
        .table
        .iter()
        .map(|(_, g)| format!("  {}  {}  {}", g.name, g.degree, g.weight))
        .collect();
    for r in rows {
        ctx.say(r);
    }
    ctx.say("differential:");
    let rows: Vec<String> = ctx
        .model
        .table
        .iter()
        .map(|(id, g)| (g.name.clone(), ctx.model.differential.value_on(id)))
        .filter(|(_, v)| !v.is_zero())
        .map(|(n, v)| format!("  d {n} = {v}"))
        .collect();
    if rows.is_empty() {
        ctx.say("  0 (bouquet)");
    }
    for r in rows {
        ctx.say(r);
    }
    ctx.finish(0)
}

fn cmd_cohomology(common: Common, degree: i64, weight: Option<i64>) -> Result<ExitCode, rhodef::Error> {
    let mut ctx = Ctx::new(&common, "cohomology")?;
    let cx = ctx.assemble(&[degree - 1, degree, degree + 1])?;
    let weights: Vec<i64> = match weight {
        Some(w) => vec![w],
        None => (common.weight_min..=-1).collect(),
    };
    let mut infos = Vec::new();
    let mut blocks = Vec::new();
    let mut total = 0usize;
    for w in weights {
        let block_dim = cx.block(degree, w)?.dim();
        let h = cx.cohomology(degree, w)?;
        total += h.dim;
        let reps: Vec<String> = h
            .h_reps
            .iter()
            .map(|v| cx.from_coords(degree, w, v).map(|d| d.to_string()))
            .collect::<Result<_, _>>()?;
        infos.push(CohomologyInfo { degree, weight: w, block_dim, dim: h.dim, representatives: reps });
        let block = cx.block(degree, w)?;
        blocks.push(BlockInfo {
            degree,
            weight: w,
            dim: block.dim(),
            basis: block
                .basis
                .iter()
                .map(|e| mcideal::block_elem_label(&cx, &e.word, e.target))
                .collect(),
        });
    }
    ctx.say(format!("H^{degree} of the controlling algebra, weights {}..-1:", common.weight_min));
    for info in &infos {
        ctx.say(format!(
            "  weight {}: block dim {}, dim H = {}",
            info.weight, info.block_dim, info.dim
        ));
        for r in &info.representatives {
            ctx.say(format!("    rep: {r}"));
        }
    }
    ctx.say(format!("total dim H^{degree} = {total}"));
    ctx.report.cohomology = Some(infos);
    ctx.report.blocks = Some(blocks);
    ctx.finish(0)
}

fn cmd_mc_ideal(common: Common, basis: Option<PathBuf>) -> Result<ExitCode, rhodef::Error> {
    let mut ctx = Ctx::new(&common, "mc-ideal")?;
    let cx = ctx.assemble(&[0, 1, 2])?;
    let basis = load_basis(&ctx, &cx, &basis)?;
    let ideal = mcideal::mc_generators(&cx, &basis)?;
    ctx.say(format!("{} generators of the Maurer-Cartan ideal:", ideal.generators.len()));
    for g in &ideal.generators {
        ctx.say(format!("  [{}] (weight {}): {}", g.label, g.weight, g.poly));
    }
    ctx.report.ideal = Some(IdealInfo {
        coordinates: coord_infos(&ideal, &cx, &basis),
        generator_count: ideal.generators.len(),
    });
    ctx.report.generators = Some(generator_infos(&ideal));
    ctx.finish(0)
}

fn parse_monomial(ideal: &McIdeal, text: &str) -> Result<Monomial, rhodef::Error> {
    let mut pairs = Vec::new();
    for factor in text.split('*') {
        let factor = factor.trim();
        let (name, exp) = match factor.split_once('^') {
            Some((n, e)) => (
                n.trim(),
                e.trim().parse::<u32>().map_err(|_| {
                    rhodef::Error::Input(format!("bad exponent in `{factor}`"))
                })?,
            ),
            None => (factor, 1),
        };
        pairs.push((ideal.coords.index_of(name)?, exp));
    }
    Ok(Monomial::from_pairs(pairs))
}

fn cmd_nilpotent(
    common: Common,
    basis: Option<PathBuf>,
    monomial: String,
    max_power: u32,
) -> Result<ExitCode, rhodef::Error> {
    let mut ctx = Ctx::new(&common, "nilpotent")?;
    ctx.report.params.max_power = Some(max_power);
    let cx = ctx.assemble(&[0, 1, 2])?;
    let basis = load_basis(&ctx, &cx, &basis)?;
    let ideal = mcideal::mc_generators(&cx, &basis)?;
    let m = parse_monomial(&ideal, &monomial)?;
    let power = mcideal::is_nilpotent_mod(&m, &ideal, max_power)?;
    let combination = match power {
        Some(e) => {
            let mut p = rhodef::poly::Polynomial::zero(ideal.coords.clone());
            p.add_term(m.clone(), scalar::one());
            let cert = mcideal::is_in_ideal(&p.pow(e), &ideal)?.expect("member");
            cert.iter()
                .map(|(c, mm, gi)| {
                    format!(
                        "{} * {} * [{}]",
                        scalar::fmt(c),
                        mm.display(&ideal.coords),
                        ideal.generators[*gi].label
                    )
                })
                .collect()
        }
        None => Vec::new(),
    };
    match power {
        Some(e) => ctx.say(format!("({monomial})^{e} lies in the ideal")),
        None => ctx.say(format!("({monomial})^e is not in the ideal for e <= {max_power}")),
    }
    ctx.report.certificates = Some(vec![CertificateInfo {
        query: monomial,
        member: power.is_some(),
        power,
        combination,
    }]);
    ctx.finish(0)
}

fn cmd_obstruction(common: Common, theta: PathBuf, expect_zero: bool) -> Result<ExitCode, rhodef::Error> {
    let mut ctx = Ctx::new(&common, "obstruction")?;
    let cx = ctx.assemble(&[1, 2])?;
    let text = std::fs::read_to_string(&theta)?;
    let theta = specfile::parse_constant_derivation(&ctx.model, &text)?;
    let report = mcideal::primary_obstruction(&cx, &theta)?;
    if report.class_zero {
        ctx.say("obstruction class: ZERO in H²");
        if let Some(w) = &report.witness {
            ctx.say(format!("  bounding element ξ with dξ = defect: {w}"));
        }
        if let Some(w) = &report.square_witness {
            ctx.say(format!("  θ₂ with [d,θ₂] = [θ,θ]: {w}"));
        }
    } else {
        ctx.say("obstruction class: NONZERO in H²");
        ctx.say(format!("  defect: {}", report.defect));
    }
    let exit = if expect_zero && !report.class_zero { 2 } else { 0 };
    ctx.report.obstruction = Some(ObstructionInfo {
        defect: report.defect.to_string(),
        class_zero: report.class_zero,
        witness: report.witness.as_ref().map(|d| d.to_string()),
        square_witness: report.square_witness.as_ref().map(|d| d.to_string()),
    });
    ctx.finish(exit)
}

fn cmd_fan(common: Common, basis: Option<PathBuf>, max_power: u32) -> Result<ExitCode, rhodef::Error> {
    let mut ctx = Ctx::new(&common, "fan")?;
    ctx.report.params.max_power = Some(max_power);
    let cx = ctx.assemble(&[0, 1, 2])?;
    let basis = load_basis(&ctx, &cx, &basis)?;
    let ideal = mcideal::mc_generators(&cx, &basis)?;
    // Split by target generator: A = the targets of higher weight.
    let mut targets: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (i, nd) in basis.iter().enumerate() {
        let mut ts: Vec<u32> = nd.der.values().map(|(x, _)| *x).collect();
        ts.dedup();
        if ts.len() != 1 {
            return Err(rhodef::Error::Precondition(
                "fan split needs single-target basis elements".into(),
            ));
        }
        targets.entry(ts[0]).or_default().push(i);
    }
    if targets.len() != 2 {
        return Err(rhodef::Error::Precondition(format!(
            "fan split needs exactly two target generators, found {}",
            targets.len()
        )));
    }
    let keys: Vec<u32> = targets.keys().copied().collect();
    let (ta, tb) = if ctx.model.table.weight(keys[0]) >= ctx.model.table.weight(keys[1]) {
        (keys[0], keys[1])
    } else {
        (keys[1], keys[0])
    };
    let a = targets[&ta].clone();
    let b = targets[&tb].clone();
    let fan = mcideal::fan_decomposition(&ideal, &a, &b, max_power)?;
    ctx.say(format!(
        "fan decomposition: {}",
        if fan.success { "SUCCESS (W_red = A ∨ B certified)" } else { "FAILED" }
    ));
    for g in &fan.non_mixed_generators {
        ctx.say(format!("  generator not mixed: {g}"));
    }
    let mut powers = BTreeMap::new();
    for (name, _, power) in &fan.products {
        match power {
            Some(e) => ctx.say(format!("  ({name})^{e} ∈ I")),
            None => ctx.say(format!("  {name}: no power <= {max_power} found")),
        }
        powers.insert(name.clone(), *power);
    }
    let exit = if fan.success { 0 } else { 2 };
    ctx.report.fan = Some(FanInfo {
        success: fan.success,
        non_mixed_generators: fan.non_mixed_generators.clone(),
        a_coordinates: a.iter().map(|&i| basis[i].name.clone()).collect(),
        b_coordinates: b.iter().map(|&i| basis[i].name.clone()).collect(),
        powers,
    });
    ctx.report.generators = Some(generator_infos(&ideal));
    ctx.finish(exit)
}

fn cmd_segre(common: Common) -> Result<ExitCode, rhodef::Error> {
    let mut ctx = Ctx::new(&common, "segre")?;
    let cx = ctx.assemble(&[1, 2])?;
    let report = mcideal::segre_relations(&cx, None)?;
    ctx.say(format!(
        "Segre analysis: c = {}, {} minors, images independent: {}, minor span matches: {}",
        report.c, report.minor_count, report.images_independent, report.minors_match
    ));
    let exit = if report.images_independent && report.minors_match { 0 } else { 2 };
    ctx.report.segre = Some(SegreInfo {
        c: report.c,
        minor_count: report.minor_count,
        images_independent: report.images_independent,
        minors_match: report.minors_match,
    });
    ctx.report.generators = Some(generator_infos(&report.ideal));
    ctx.finish(exit)
}

fn cmd_gauge(
    common: Common,
    p: PathBuf,
    zeta: PathBuf,
    at: Option<String>,
) -> Result<ExitCode, rhodef::Error> {
    let mut ctx = Ctx::new(&common, "gauge")?;
    ctx.report.params.degrees = Vec::new();
    let p_text = std::fs::read_to_string(&p)?;
    let p0 = specfile::parse_constant_derivation(&ctx.model, &p_text)?;
    let z_text = std::fs::read_to_string(&zeta)?;
    let z_coeffs = specfile::parse_derivation_file(&ctx.model, &z_text)?;
    let zeta = DerPoly::from_coeffs(ctx.model.table.clone(), 0, z_coeffs)?;
    let path = gauge::flow_solve(&ctx.model, &p0, &zeta)?;
    let flow = gauge::mc_defect_flow(&ctx.model, &path)?;
    let eq = gauge::flow_equation_residual(&ctx.model, &path)?;
    ctx.say("η(t) coefficients:");
    let rows: Vec<String> =
        path.eta.coeffs.iter().map(|(k, d)| format!("  t^{k}: {d}")).collect();
    for r in rows {
        ctx.say(r);
    }
    ctx.say(format!("flow equation dη/dt + dζ + [η,ζ] = 0 holds: {}", eq.is_zero()));
    ctx.say(format!(
        "Maurer-Cartan defect u(t): {}",
        if flow.u.is_zero() { "0 (on shell for all t)".to_string() } else { format!("{} coefficients", flow.u.coeffs.len()) }
    ));
    ctx.say(format!("conservation du/dt + [ζ,u] = 0 holds: {}", flow.ode_residual.is_zero()));
    let eta_at = match &at {
        Some(text) => {
            let t = scalar::parse(text)
                .ok_or_else(|| rhodef::Error::Input(format!("bad time `{text}`")))?;
            let v = path.eta.eval(&t)?;
            ctx.say(format!("η({}) = {v}", scalar::fmt(&t)));
            Some((scalar::fmt(&t), v.to_string()))
        }
        None => None,
    };
    let ok = eq.is_zero() && flow.ode_residual.is_zero();
    ctx.report.gauge = Some(GaugeInfo {
        eta: path.eta.coeffs.iter().map(|(k, d)| (*k, d.to_string())).collect(),
        zeta: path.zeta.coeffs.iter().map(|(k, d)| (*k, d.to_string())).collect(),
        defect: flow.u.coeffs.iter().map(|(k, d)| (*k, d.to_string())).collect(),
        flow_equation_holds: eq.is_zero(),
        conservation_holds: flow.ode_residual.is_zero(),
        eta_at,
    });
    ctx.finish(if ok { 0 } else { 2 })
}

fn cmd_orbit(common: Common, family: String, point: String) -> Result<ExitCode, rhodef::Error> {
    let mut ctx = Ctx::new(&common, "orbit")?;
    ctx.report.params.degrees = Vec::new();
    let coords: Vec<Scalar> = point
        .split(',')
        .map(|s| {
            scalar::parse(s.trim())
                .ok_or_else(|| rhodef::Error::Input(format!("bad coordinate `{s}`")))
        })
        .collect::<Result<_, _>>()?;
    let fam = match family.as_str() {
        "quadratic2" => OrbitFamily::QuadraticForm2,
        "bilinear2" => OrbitFamily::BilinearPair2,
        other => return Err(rhodef::Error::NotImplemented(other.to_string())),
    };
    let nf = gauge::orbit_normal_form(fam, &coords)?;
    ctx.say(format!("normal form: {}", nf.label));
    ctx.say(format!("rank: {}", nf.rank));
    if let Some(d) = &nf.discriminant_class {
        ctx.say(format!("discriminant class (squarefree representative): {d}"));
    }
    if !nf.degenerates_to.is_empty() {
        ctx.say(format!("degenerates to: {}", nf.degenerates_to.join(", ")));
    }
    ctx.report.orbits = Some(vec![OrbitInfo {
        point: coords.iter().map(scalar::fmt).collect(),
        label: nf.label,
        rank: nf.rank,
        discriminant_class: nf.discriminant_class.map(|d| d.to_string()),
        degenerates_to: nf.degenerates_to,
    }]);
    ctx.finish(0)
}

fn cmd_miniversal(common: Common, cutoff: u32) -> Result<ExitCode, rhodef::Error> {
    let mut ctx = Ctx::new(&common, "miniversal")?;
    ctx.report.params.cutoff = Some(cutoff);
    let cx = ctx.assemble(&[0, 1, 2, 3, 4])?;
    let br = miniversal::transfer(&cx, cutoff)?;
    let master = miniversal::master_identity_check(&cx, &br)?;
    let ideal = miniversal::miniversal_ideal(&br)?;
    // Jacobi residuals on all tuples up to arity min(cutoff, 4).
    let n1 = br.basis.h1.len() as u32;
    let mut jacobi_ok = true;
    for n in 2..=cutoff.min(4) {
        let mut tuples = Vec::new();
        gen_tuples(n1, n as usize, &mut Vec::new(), &mut tuples);
        for (_, res) in miniversal::check_n_jacobi(&br, n, &tuples)? {
            if res.iter().any(|c| !num::Zero::is_zero(c)) {
                jacobi_ok = false;
            }
        }
    }
    ctx.say(format!(
        "transfer to cutoff {cutoff}: dim H¹ = {}, dim H² = {}, dim H³ = {} ({})",
        br.basis.h1.len(),
        br.basis.h2.len(),
        br.basis.h3.len(),
        if br.strict { "strict" } else { "corrected" }
    ));
    ctx.say(format!("master identity holds: {}", master.is_empty()));
    ctx.say(format!("generalized Jacobi residuals vanish: {jacobi_ok}"));
    ctx.say(format!("miniversal ideal: {} generators in {} tangent coordinates", ideal.generators.len(), ideal.coords.len()));
    for g in &ideal.generators {
        ctx.say(format!("  [{}] (weight {}): {}", g.label, g.weight, g.poly));
    }
    let ok = master.is_empty() && jacobi_ok;
    ctx.report.miniversal = Some(MiniversalInfo {
        cutoff,
        strict: br.strict,
        h_dims: [br.basis.h1.len(), br.basis.h2.len(), br.basis.h3.len()],
        tangent_coordinates: ideal
            .coords
            .coords
            .iter()
            .enumerate()
            .map(|(i, c)| CoordInfo {
                name: c.name.clone(),
                content: c.content.clone(),
                weight: c.weight,
                meaning: Some(br.basis.h1[i].1.to_string()),
            })
            .collect(),
        generators: generator_infos(&ideal),
        master_identity_holds: master.is_empty(),
        jacobi_residuals_zero: jacobi_ok,
    });
    ctx.finish(if ok { 0 } else { 2 })
}

fn gen_tuples(n1: u32, len: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if cur.len() == len {
        out.push(cur.clone());
        return;
    }
    let start = cur.last().copied().unwrap_or(0);
    for i in start..n1 {
        cur.push(i);
        gen_tuples(n1, len, cur, out);
        cur.pop();
    }
}
