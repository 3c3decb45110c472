use std::fs;

use covproc::bounds::{bounds_report, verify_lower_bound_chain, BoundsReport};
use covproc::channel::{random_covariant_channel, ChannelDocument, ChannelMap};
use covproc::commutant::{adapted_basis, is_abelian, AdaptedBasis};
use covproc::group::{catalog_group, load_group_json, FiniteGroup, Representation};
use covproc::matrix::{random_states, to_pairs, Tolerance};
use covproc::processor::{
    build_compressed_processor, build_mp_processor, build_teleport_processor,
    derive_extremes_abelian, purify_program, refined_purification_bound, verify_processor,
    Processor, ProgramMode, VerificationReport,
};
use serde::Serialize;

use crate::{BuildArgs, Emit, Failure, Format, GlobalArgs, Kind, SCHEMA_VERSION};

pub struct Context {
    pub group: FiniteGroup,
    pub source: String,
    pub u_label: String,
    pub v_label: String,
    pub u: Representation,
    pub v: Representation,
    pub tol: Tolerance,
}

impl Context {
    pub fn load(g: &GlobalArgs) -> Result<Self, Failure> {
        let tol = Tolerance::with_eq(g.tol);
        let (group, source) = match (&g.group, &g.group_file) {
            (Some(name), None) => (catalog_group(name)?, name.clone()),
            (None, Some(path)) => {
                let text = fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
                let group = load_group_json(&text, tol.eq).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
                (group, path.display().to_string())
            }
            _ => return Err(Failure("one of --group or --group-file is required".into())),
        };
        let default = default_label(&group);
        let u_label = g.u.clone().unwrap_or_else(|| default.clone());
        let v_label = g.v.clone().unwrap_or(default);
        let u = group.irrep_rep(&u_label)?.clone();
        let v = group.irrep_rep(&v_label)?.clone();
        Ok(Self {
            group,
            source,
            u_label,
            v_label,
            u,
            v,
            tol,
        })
    }

    fn basis(&self) -> Result<AdaptedBasis, Failure> {
        Ok(adapted_basis(&self.u, &self.v, &self.group.irreps, self.tol)?)
    }

    fn header(&self, command: &'static str) -> Header {
        Header {
            schema_version: SCHEMA_VERSION,
            command,
            group: self.source.clone(),
            u: self.u_label.clone(),
            v: self.v_label.clone(),
        }
    }
}

/// First irrep of largest dimension.
fn default_label(group: &FiniteGroup) -> String {
    let mut best = group.irreps.irrep(0);
    for irrep in group.irreps.iter() {
        if irrep.rep.dim() > best.rep.dim() {
            best = irrep;
        }
    }
    best.label.clone()
}

#[derive(Serialize)]
pub struct Header {
    pub schema_version: u32,
    pub command: &'static str,
    pub group: String,
    pub u: String,
    pub v: String,
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String, Failure> {
    Ok(serde_json::to_string_pretty(value)?)
}

#[derive(Serialize)]
struct BlockJson {
    label: String,
    b: usize,
    n: usize,
}

#[derive(Serialize)]
struct DecomposeReport {
    #[serde(flatten)]
    header: Header,
    #[serde(rename = "K")]
    k: usize,
    blocks: Vec<BlockJson>,
    d_c: usize,
    d_n: usize,
    abelian: bool,
    unitarity_residual: f64,
    block_diagonal_residual: f64,
}

pub fn decompose(g: &GlobalArgs) -> Result<Emit, Failure> {
    let ctx = Context::load(g)?;
    let basis = ctx.basis()?;
    let bs = basis.structure();
    let report = DecomposeReport {
        header: ctx.header("decompose"),
        k: bs.k(),
        blocks: bs
            .blocks
            .iter()
            .map(|b| BlockJson {
                label: b.label.clone(),
                b: b.b,
                n: b.n,
            })
            .collect(),
        d_c: bs.d_c(),
        d_n: bs.d_n(),
        abelian: is_abelian(bs),
        unitarity_residual: basis.unitarity_residual(),
        block_diagonal_residual: basis.block_diagonal_residual(&ctx.group.irreps),
    };
    Ok(Emit {
        body: to_json(&report)?,
        check_failed: false,
    })
}

fn load_extremes(path: &std::path::Path, tol: f64) -> Result<Vec<ChannelMap>, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    let docs: Vec<ChannelDocument> =
        serde_json::from_str(&text).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    docs.iter()
        .enumerate()
        .map(|(i, d)| ChannelMap::from_document(d, tol).map_err(|e| Failure(format!("{}: extreme {i}: {e}", path.display()))))
        .collect()
}

/// The requested processor and the program dimension before purification.
pub fn construct(ctx: &Context, args: &BuildArgs) -> Result<(Processor, usize), Failure> {
    if args.extremes.is_some() && args.kind != Kind::Mp {
        return Err(Failure("--extremes only applies to --kind mp".into()));
    }
    let p = match args.kind {
        Kind::Teleport => build_teleport_processor(&ctx.u, &ctx.v, ctx.tol)?,
        Kind::Compressed => {
            let basis = ctx.basis()?;
            build_compressed_processor(&ctx.u, &ctx.v, basis.structure(), &basis, ctx.tol)?
        }
        Kind::Mp => {
            let extremes = match &args.extremes {
                Some(path) => load_extremes(path, ctx.tol.eq)?,
                None => {
                    let basis = ctx.basis()?;
                    derive_extremes_abelian(&ctx.u, &ctx.v, basis.structure(), &basis, ctx.tol)?
                }
            };
            let mode = if args.pure_programs { ProgramMode::Pure } else { ProgramMode::Mixed };
            build_mp_processor(&extremes, mode, ctx.tol.eq)?
        }
    };
    let base_dp = p.program_dim();
    Ok((if args.purify { purify_program(&p) } else { p }, base_dp))
}

#[derive(Serialize)]
struct MatrixDump {
    rows: usize,
    cols: usize,
    entries: Vec<[f64; 2]>,
}

#[derive(Serialize)]
struct BuildReport {
    #[serde(flatten)]
    header: Header,
    kind: &'static str,
    d1: usize,
    d2: usize,
    #[serde(rename = "d_P")]
    d_p: usize,
    purified: bool,
    kraus_operators: usize,
    trace_preservation_residual: f64,
    covariance_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    povm_completeness_residual: Option<f64>,
    refined_purification_bound: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    process_choi: Option<MatrixDump>,
}

pub fn build(g: &GlobalArgs, args: &BuildArgs, dump_choi: bool) -> Result<Emit, Failure> {
    let ctx = Context::load(g)?;
    let (p, base_dp) = construct(&ctx, args)?;
    let process_choi = if dump_choi {
        let c = p
            .process_choi()
            .ok_or_else(|| Failure("processor Choi matrix is too large to dump".into()))?;
        Some(MatrixDump {
            rows: c.nrows(),
            cols: c.ncols(),
            entries: to_pairs(&c),
        })
    } else {
        None
    };
    let report = BuildReport {
        header: ctx.header("build"),
        kind: p.kind().name(),
        d1: p.d1(),
        d2: p.d2(),
        d_p: p.program_dim(),
        purified: args.purify,
        kraus_operators: p.kraus().len(),
        trace_preservation_residual: p.trace_preservation_residual(),
        covariance_residual: p.covariance_residual(&ctx.u, &ctx.v)?,
        povm_completeness_residual: p.povm().map(|m| m.completeness_residual()),
        refined_purification_bound: refined_purification_bound(p.d1(), p.d2(), base_dp),
        process_choi,
    };
    Ok(Emit {
        body: to_json(&report)?,
        check_failed: false,
    })
}

#[derive(Serialize)]
struct Seeds {
    channels: Vec<u64>,
    states: u64,
}

#[derive(Serialize)]
struct VerifyReport {
    #[serde(flatten)]
    header: Header,
    seeds: Seeds,
    tolerance: f64,
    passed: bool,
    #[serde(flatten)]
    report: VerificationReport,
}

pub fn verify(g: &GlobalArgs, args: &BuildArgs, channels: usize, states: usize) -> Result<Emit, Failure> {
    let ctx = Context::load(g)?;
    let (p, _) = construct(&ctx, args)?;
    let seeds: Vec<u64> = (1..=channels as u64).map(|k| g.seed.wrapping_add(k)).collect();
    let targets = seeds
        .iter()
        .map(|&s| random_covariant_channel(&ctx.u, &ctx.v, s, ctx.tol))
        .collect::<Result<Vec<_>, _>>()?;
    let rhos = random_states(ctx.u.dim(), states, g.seed);
    let report = verify_processor(&p, &targets, &rhos);
    let passed = report.max_error <= g.tol;
    let out = VerifyReport {
        header: ctx.header("verify"),
        seeds: Seeds {
            channels: seeds,
            states: g.seed,
        },
        tolerance: g.tol,
        passed,
        report,
    };
    Ok(Emit {
        body: to_json(&out)?,
        check_failed: !passed,
    })
}

#[derive(Serialize)]
struct BoundsOutput {
    #[serde(flatten)]
    header: Header,
    rows: Vec<BoundsReport>,
}

pub fn bounds(g: &GlobalArgs, eps: &[f64], chain: bool) -> Result<Emit, Failure> {
    let ctx = Context::load(g)?;
    let basis = ctx.basis()?;
    let bs = basis.structure();
    let processor = if chain {
        Some(build_compressed_processor(&ctx.u, &ctx.v, bs, &basis, ctx.tol)?)
    } else {
        None
    };
    let mut rows = Vec::with_capacity(eps.len());
    for &e in eps {
        let mut r = bounds_report(e, bs)?;
        if let Some(p) = &processor {
            r.holevo_chain = Some(verify_lower_bound_chain(p, bs, &basis, e)?);
        }
        rows.push(r);
    }
    let body = match g.format {
        Format::Csv => {
            let mut s = String::from(BoundsReport::CSV_HEADER);
            for r in &rows {
                s.push('\n');
                s.push_str(&r.csv_row());
            }
            s
        }
        Format::Json => to_json(&BoundsOutput {
            header: ctx.header("bounds"),
            rows,
        })?,
    };
    Ok(Emit {
        body,
        check_failed: false,
    })
}

pub fn export_group(g: &GlobalArgs) -> Result<Emit, Failure> {
    let ctx = Context::load(g)?;
    Ok(Emit {
        body: to_json(&ctx.group.to_spec())?,
        check_failed: false,
    })
}
