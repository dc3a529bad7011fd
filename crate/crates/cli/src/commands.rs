use std::path::{Path, PathBuf};
use std::sync::Arc;

use log::{debug, info};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use qlift_core::derham::comparison_phi;
use qlift_core::koszul::{
    delta, graded_cohomology_dim, internal_degree_shifts, CoboundarySolver, Cochain,
};
use qlift_core::lift::{
    extend_from_lift, gen_involutive_shear, quantize, verify_certificate, DegreePolicy, Extension,
    Quantization, Shear, ShearShape,
};
use qlift_core::polyring::{HSeries, Poly};
use qlift_core::weyl::{is_involutive, Involutivity};
use qlift_core::Error;

use crate::report::{self, Report, Status};
use crate::system::{SystemError, SystemFile};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    System { path: PathBuf, source: SystemError },
    #[error(transparent)]
    Core(#[from] Error),
}

/// A system file together with the bytes it was read from.
pub struct Input {
    pub bytes: Vec<u8>,
    pub system: SystemFile,
}

pub fn read_bytes(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load(path: &Path) -> Result<Input, CliError> {
    let bytes = read_bytes(path)?;
    let text = String::from_utf8_lossy(&bytes);
    let system = SystemFile::parse(&text).map_err(|source| CliError::System {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(Input { bytes, system })
}

fn require_generators(input: &Input) -> Result<Vec<Poly>, CliError> {
    if input.system.generators.is_empty() {
        return Err(CliError::Usage(
            "the system file defines no generators".into(),
        ));
    }
    Ok(input.system.symbols())
}

fn non_involutive(command: &str, input: &Input, fs: &[Poly]) -> Result<Option<Report>, CliError> {
    Ok(match is_involutive(fs)? {
        Involutivity::Involutive => None,
        Involutivity::Fails { i, j, bracket } => Some(Report::new(
            command,
            &input.bytes,
            Status::NonInvolutive,
            json!({ "witness": report::witness(i, j, &bracket) }),
        )),
    })
}

pub fn check(input: &Input) -> Result<Report, CliError> {
    let fs = require_generators(input)?;
    if let Some(r) = non_involutive("check", input, &fs)? {
        return Ok(r);
    }
    let k = fs.len();
    Ok(Report::new(
        "check",
        &input.bytes,
        Status::Involutive,
        json!({ "n": input.system.n, "system": report::polys(&fs), "pairs_checked": k * (k - 1) / 2 }),
    ))
}

fn policy(input: &Input, degree_bound: Option<u32>) -> DegreePolicy {
    DegreePolicy {
        uniform: degree_bound.or(input.system.degree_bound),
        per_order: input.system.degree_bound_at.clone(),
    }
}

pub fn quantize_cmd(
    input: &Input,
    order: Option<usize>,
    degree_bound: Option<u32>,
    solver: &Arc<dyn CoboundarySolver>,
) -> Result<Report, CliError> {
    let fs = require_generators(input)?;
    let order = order
        .or(input.system.order)
        .ok_or_else(|| CliError::Usage("no order given; pass --order or set `order = L`".into()))?;
    if let Some(r) = non_involutive("quantize", input, &fs)? {
        return Ok(r);
    }
    info!(
        "quantising {} generators to order {order} with solver {}",
        fs.len(),
        solver.name()
    );
    let policy = policy(input, degree_bound);
    Ok(match quantize(&fs, order, &policy, solver.as_ref())? {
        Quantization::Quantised(c) => {
            debug!("{} nontrivial corrections", c.corrections.len());
            let check = verify_certificate(&c);
            Report::new(
                "quantize",
                &input.bytes,
                Status::Quantised,
                json!({
                    "solver": solver.name(),
                    "certificate": report::certificate(&c),
                    "verification": { "ok": check.ok(), "max_order_checked": check.max_order_checked },
                }),
            )
        }
        Quantization::Obstructed(o) => Report::new(
            "quantize",
            &input.bytes,
            Status::Obstructed,
            json!({ "solver": solver.name(), "order": order, "obstruction": report::obstruction(&o) }),
        ),
    })
}

pub fn anomaly_cmd(
    input: &Input,
    level: Option<usize>,
    degree_bound: Option<u32>,
    solver: &Arc<dyn CoboundarySolver>,
) -> Result<Report, CliError> {
    require_generators(input)?;
    let g: Vec<HSeries> = input.system.generators.clone();
    let top = g.iter().map(HSeries::truncation).max().unwrap_or(0);
    let level = level.unwrap_or(top.saturating_sub(1));
    info!("anomaly of a lift of a {level}-lifting");
    let ext = match extend_from_lift(&g, level, &policy(input, degree_bound), solver.as_ref()) {
        Err(Error::NotALift { i, j, order, .. }) => {
            return Ok(Report::new(
                "anomaly",
                &input.bytes,
                Status::NotALift,
                json!({ "level": level, "i": i + 1, "j": j + 1, "order": order }),
            ))
        }
        other => other?,
    };
    Ok(match ext {
        Extension::Lifted {
            lifting,
            correction,
        } => {
            let lifted: Vec<Value> = lifting.series().iter().map(report::series).collect();
            match correction {
                None => Report::new(
                    "anomaly",
                    &input.bytes,
                    Status::AnomalyZero,
                    json!({
                        "level": level,
                        "anomaly": report::cochain(&Cochain::zero(input.system.n, g.len(), 2)),
                        "lifting": lifted,
                    }),
                ),
                Some(step) => Report::new(
                    "anomaly",
                    &input.bytes,
                    Status::AnomalyExact,
                    json!({
                        "level": level,
                        "anomaly": report::cochain(&step.anomaly),
                        "correction": report::polys(&step.correction),
                        "lifting": lifted,
                    }),
                ),
            }
        }
        Extension::Obstructed(o) => Report::new(
            "anomaly",
            &input.bytes,
            Status::AnomalyUnresolved,
            json!({ "level": level, "obstruction": report::obstruction(&o) }),
        ),
    })
}

pub fn cohomology(input: &Input, p: Option<usize>, max_degree: i64) -> Result<Report, CliError> {
    let fs = require_generators(input)?;
    if let Some(r) = non_involutive("cohomology", input, &fs)? {
        return Ok(r);
    }
    let shifts = internal_degree_shifts(&fs)?;
    let lowest = -shifts.iter().filter(|&&s| s > 0).sum::<i64>();
    let degrees: Vec<usize> = match p {
        Some(p) if p > fs.len() => {
            return Err(CliError::Usage(format!(
                "--p {p} exceeds the number of generators ({})",
                fs.len()
            )))
        }
        Some(p) => vec![p],
        None => (0..=fs.len()).collect(),
    };
    let mut table = Vec::new();
    for &p in &degrees {
        for d in lowest..=max_degree {
            let dim = graded_cohomology_dim(&fs, p, d)?;
            debug!("H^{p} in internal degree {d}: {dim}");
            table.push(json!({ "p": p, "internal_degree": d, "dim": dim }));
        }
    }
    Ok(Report::new(
        "cohomology",
        &input.bytes,
        Status::Computed,
        json!({ "shifts": shifts, "dimensions": table }),
    ))
}

pub fn compare_form(input: &Input) -> Result<Report, CliError> {
    let fs = require_generators(input)?;
    let a =
        input.system.form.as_ref().ok_or_else(|| {
            CliError::Usage("the system file defines no `form[...]` lines".into())
        })?;
    if let Some(r) = non_involutive("compare-form", input, &fs)? {
        return Ok(r);
    }
    let image = comparison_phi(a, &fs)?;
    let cocycle = image.degree() >= fs.len() || delta(&image, &fs)?.is_zero();
    Ok(Report::new(
        "compare-form",
        &input.bytes,
        Status::Computed,
        json!({ "form": a.to_string(), "image": report::cochain(&image), "cocycle": cocycle }),
    ))
}

pub struct GenerateArgs {
    pub n: usize,
    pub seed: u64,
    pub steps: usize,
    pub max_degree: u32,
}

pub fn generate(input: Option<&Input>, args: &GenerateArgs) -> Result<Report, CliError> {
    let (n, shears, bytes) = match input {
        Some(input) => (
            input.system.n,
            input.system.shears.clone(),
            input.bytes.clone(),
        ),
        None => {
            if args.n == 0 || args.max_degree < 2 {
                return Err(CliError::Usage(
                    "need --n >= 1 and --max-degree >= 2".into(),
                ));
            }
            let shape = ShearShape {
                steps: args.steps,
                max_degree: args.max_degree,
                ..ShearShape::default()
            };
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            let shears = Shear::random_sequence(args.n, shape, &mut rng);
            let key = format!(
                "generate n={} seed={} steps={} max-degree={}",
                args.n, args.seed, args.steps, args.max_degree
            );
            (args.n, shears, key.into_bytes())
        }
    };
    let fs = gen_involutive_shear(n, &shears)?;
    let mut file = format!("n = {n}\n");
    for s in &shears {
        file.push_str(&format!("{s}\n"));
    }
    for (i, f) in fs.iter().enumerate() {
        file.push_str(&format!("f{} = {f}\n", i + 1));
    }
    Ok(Report::new(
        "generate",
        &bytes,
        Status::Generated,
        json!({
            "n": n,
            "shears": shears.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
            "system": report::polys(&fs),
            "system_file": file,
        }),
    ))
}

pub fn verify(path: &Path) -> Result<Report, CliError> {
    let bytes = read_bytes(path)?;
    let doc: Value = serde_json::from_slice(&bytes)
        .map_err(|e| CliError::Usage(format!("{}: not a JSON document: {e}", path.display())))?;
    let (status, payload) = match report::read_certificate(&doc) {
        Err(e) => (Status::Rejected, json!({ "failure": e.to_string() })),
        Ok(c) => {
            let r = verify_certificate(&c);
            let status = if r.ok() {
                Status::Verified
            } else {
                Status::Rejected
            };
            (
                status,
                json!({
                    "max_order_checked": r.max_order_checked,
                    "failure": r.failure.map(|f| f.to_string()),
                }),
            )
        }
    };
    Ok(Report::new("verify", &bytes, status, payload))
}
