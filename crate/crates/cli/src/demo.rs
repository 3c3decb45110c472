use covproc::bounds::{lower_bound, verify_lower_bound_chain};
use covproc::channel::a4::{intertwiner, pauli_operators, projector};
use covproc::channel::{
    catalog_channel, choi_rank, is_covariant, is_covariant_under_pairs, random_covariant_channel,
    CatalogChannel, ChannelMap,
};
use covproc::commutant::adapted_basis;
use covproc::error::Error;
use covproc::group::{bar_tensor_rep, catalog_group, multiplicities, FiniteGroup, Representation};
use covproc::matrix::{
    c64, flip, identity, max_abs, maximally_entangled_state, random_states, random_unitaries,
    trace_norm, ComplexMatrix, Tolerance,
};
use covproc::processor::{
    build_compressed_processor, build_mp_processor, build_teleport_processor,
    derive_extremes_abelian, verify_processor, ProgramMode,
};
use serde::Serialize;

use crate::commands::to_json;
use crate::{DemoName, Emit, Failure, GlobalArgs, SCHEMA_VERSION};

#[derive(Serialize)]
struct Check {
    name: &'static str,
    passed: bool,
    detail: String,
}

fn check(name: &'static str, passed: bool, detail: String) -> Check {
    Check { name, passed, detail }
}

fn below(name: &'static str, value: f64, bound: f64) -> Check {
    check(name, value <= bound, format!("{value:.3e} <= {bound:.0e}"))
}

#[derive(Serialize)]
struct DemoReport {
    schema_version: u32,
    command: &'static str,
    demo: &'static str,
    seed: u64,
    checks: Vec<Check>,
    passed: bool,
}

pub fn run(name: DemoName, g: &GlobalArgs) -> Result<Emit, Failure> {
    let (label, checks) = match name {
        DemoName::A4 => ("a4", a4(g.seed)?),
        DemoName::Pauli => ("pauli", pauli(g.seed)?),
        DemoName::Depolarizing => ("depolarizing", depolarizing(g.seed)?),
    };
    let passed = checks.iter().all(|c| c.passed);
    let report = DemoReport {
        schema_version: SCHEMA_VERSION,
        command: "demo",
        demo: label,
        seed: g.seed,
        checks,
        passed,
    };
    Ok(Emit {
        body: to_json(&report)?,
        check_failed: !passed,
    })
}

fn irreps(group: &str, u: &str, v: &str) -> Result<(FiniteGroup, Representation, Representation), Failure> {
    let g = catalog_group(group)?;
    let ur = g.irrep_rep(u)?.clone();
    let vr = g.irrep_rep(v)?.clone();
    Ok((g, ur, vr))
}

fn covariant_targets(u: &Representation, v: &Representation, n: u64, seed: u64) -> Result<Vec<ChannelMap>, Failure> {
    (1..=n)
        .map(|k| Ok(random_covariant_channel(u, v, seed.wrapping_add(k), Tolerance::default())?))
        .collect()
}

fn a4(seed: u64) -> Result<Vec<Check>, Failure> {
    let tol = Tolerance::default();
    let (g, th, _) = irreps("a4", "theta", "theta")?;
    let mut out = Vec::new();

    let m = multiplicities(&bar_tensor_rep(&th, &th)?, &g.irreps, tol)?;
    let counts: Vec<usize> = ["phi0", "phi1", "phi2", "theta"]
        .iter()
        .map(|l| m.get(l).unwrap_or(0))
        .collect();
    out.push(check(
        "theta x theta multiplicities",
        counts == [1, 1, 1, 2] && m.max_residual < 1e-9,
        format!("{counts:?}"),
    ));

    let basis = adapted_basis(&th, &th, &g.irreps, tol)?;
    let bs = basis.structure();
    let blocks: Vec<(usize, usize)> = bs.blocks.iter().map(|b| (b.b, b.n)).collect();
    out.push(check(
        "commutant blocks",
        blocks == [(1, 1), (1, 1), (1, 1), (3, 2)] && bs.d_c() == 5 && bs.d_n() == 7,
        format!("{blocks:?}, d_c={}, d_n={}", bs.d_c(), bs.d_n()),
    ));
    out.push(below("adapted basis block-diagonal", basis.block_diagonal_residual(&g.irreps), 1e-8));

    let ops = pauli_operators();
    let p = projector();
    let mut anti: f64 = 0.0;
    for (i, a) in ops.iter().enumerate() {
        for (j, b) in ops.iter().enumerate() {
            let delta = if i == j { 2.0 } else { 0.0 };
            anti = anti.max(trace_norm(&(a * b + b * a - &p * c64(delta, 0.0))));
        }
    }
    out.push(below("qubit-algebra anticommutators", anti, 1e-9));

    let phi1 = g.irrep_rep("phi1")?;
    let v = intertwiner();
    let inter = g
        .table
        .elements()
        .map(|e| max_abs(&(th.matrix(e) * &v * th.matrix(e).adjoint() - &v * phi1.matrix(e)[(0, 0)])))
        .fold(0.0, f64::max);
    out.push(below("intertwining relation", inter, 1e-9));

    let mut unitary_ok = true;
    let mut unitary_res: f64 = 0.0;
    for j in 0..3 {
        let t = catalog_channel(CatalogChannel::A4Unitary { j }, tol.eq)?;
        let cov = is_covariant(&t, &th, &th, tol.eq)?;
        unitary_res = unitary_res.max(cov.max_residual);
        unitary_ok &= cov.covariant && choi_rank(&t, 1e-9) == 1;
    }
    out.push(check(
        "unitary extreme points",
        unitary_ok,
        format!("3 rank-one covariant channels, residual {unitary_res:.3e}"),
    ));

    let wh = catalog_channel(CatalogChannel::WernerHolevo { d: 3 }, tol.eq)?;
    let antisym = (identity(9) - flip(3)) * c64(1.0 / 6.0, 0.0);
    out.push(below("Werner-Holevo Choi", max_abs(&(wh.choi_matrix() - antisym)), 1e-10));

    let pairs: Vec<(ComplexMatrix, ComplexMatrix)> = random_unitaries(3, 20, seed)
        .into_iter()
        .map(|u| (u.conjugate(), u))
        .collect();
    let cov = is_covariant_under_pairs(&wh, &pairs, tol.eq)?;
    out.push(below("Werner-Holevo covariance", cov.max_residual, 1e-9));

    let interior = [[0.0, 0.0, 0.0], [0.3, -0.2, 0.5], [0.6, 0.6, 0.1], [-0.5, 0.4, -0.7]];
    let mut bloch_res: f64 = 0.0;
    let mut bloch_ok = true;
    for lambda in interior {
        let t = catalog_channel(CatalogChannel::A4Bloch { lambda }, tol.eq)?;
        let cov = is_covariant(&t, &th, &th, tol.eq)?;
        bloch_res = bloch_res.max(cov.max_residual);
        bloch_ok &= cov.covariant;
    }
    out.push(check(
        "Bloch-ball channels",
        bloch_ok,
        format!("{} valid covariant channels, residual {bloch_res:.3e}", interior.len()),
    ));

    let poles = [[1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 1.0]];
    let mut ranks = Vec::new();
    for lambda in poles {
        ranks.push(choi_rank(&catalog_channel(CatalogChannel::A4Bloch { lambda }, tol.eq)?, 1e-9));
    }
    let outside = catalog_channel(CatalogChannel::A4Bloch { lambda: [0.8, 0.8, 0.0] }, tol.eq);
    out.push(check(
        "Bloch-sphere extreme points",
        ranks.iter().all(|&r| r == 3) && matches!(outside, Err(Error::OutOfRange(_))),
        format!("pole Choi ranks {ranks:?}, outside the ball rejected"),
    ));

    let targets = covariant_targets(&th, &th, 20, seed)?;
    let rhos = random_states(3, 20, seed);
    let tp = build_teleport_processor(&th, &th, tol)?;
    let r = verify_processor(&tp, &targets, &rhos);
    out.push(check(
        "teleportation processor",
        tp.program_dim() == 9 && r.max_error <= 1e-8,
        format!("d_P=9, max error {:.3e}", r.max_error),
    ));

    let cp = build_compressed_processor(&th, &th, bs, &basis, tol)?;
    let r = verify_processor(&cp, &targets, &rhos);
    let lower = lower_bound(0.0, bs)?;
    let chain = verify_lower_bound_chain(&cp, bs, &basis, 0.0)?;
    out.push(check(
        "compressed processor meets lower bound",
        cp.program_dim() == 5 && r.max_error <= 1e-8 && lower == 5.0 && chain.min_slack >= -1e-8,
        format!(
            "d_P={}, max error {:.3e}, lower bound {lower}, chi {:.9}",
            cp.program_dim(),
            r.max_error,
            chain.chi_program
        ),
    ));
    Ok(out)
}

fn pauli(seed: u64) -> Result<Vec<Check>, Failure> {
    let tol = Tolerance::default();
    let (g, w, _) = irreps("pauli2", "w", "w")?;
    let mut out = Vec::new();

    let basis = adapted_basis(&w, &w, &g.irreps, tol)?;
    let bs = basis.structure();
    out.push(check(
        "w x w decomposition",
        bs.blocks.len() == 4 && bs.blocks.iter().all(|b| (b.b, b.n) == (1, 1)),
        format!("{} blocks of shape (1,1)", bs.blocks.len()),
    ));

    let tp = build_teleport_processor(&w, &w, tol)?;
    let povm = tp.povm().ok_or_else(|| Failure("teleportation processor has no POVM".into()))?;
    out.push(below("Bell POVM completeness", povm.completeness_residual(), 1e-9));
    let mut distinct: Vec<ComplexMatrix> = Vec::new();
    for m in povm.elements() {
        let proj = m * c64(4.0, 0.0);
        if !distinct.iter().any(|d| max_abs(&(d - &proj)) < 1e-9) {
            distinct.push(proj);
        }
    }
    let projectors = distinct.iter().all(|p| max_abs(&(p * p - p)) < 1e-9);
    out.push(check(
        "Bell projectors",
        distinct.len() == 4 && projectors,
        format!("{} distinct rank-one projectors", distinct.len()),
    ));

    let targets = covariant_targets(&w, &w, 20, seed)?;
    let rhos = random_states(2, 20, seed);
    let r = verify_processor(&tp, &targets, &rhos);
    out.push(check(
        "teleportation processor",
        tp.program_dim() == 4 && r.max_error <= 1e-9,
        format!("d_P={}, max error {:.3e}", tp.program_dim(), r.max_error),
    ));

    let cp = build_compressed_processor(&w, &w, bs, &basis, tol)?;
    let r = verify_processor(&cp, &targets, &rhos);
    out.push(check(
        "compressed processor",
        cp.program_dim() == 4 && r.max_error <= 1e-9,
        format!("d_P={}, max error {:.3e}", cp.program_dim(), r.max_error),
    ));

    let extremes = derive_extremes_abelian(&w, &w, bs, &basis, tol)?;
    let mp = build_mp_processor(&extremes, ProgramMode::Mixed, tol.eq)?;
    let r = verify_processor(&mp, &targets, &rhos);
    out.push(check(
        "measure-and-prepare processor",
        mp.program_dim() == 4 && r.max_error <= 1e-8,
        format!("d_P={}, max error {:.3e}", mp.program_dim(), r.max_error),
    ));

    let lower = lower_bound(0.0, bs)?;
    out.push(check("exact lower bound", lower == 4.0, format!("{lower}")));
    Ok(out)
}

fn depolarizing(seed: u64) -> Result<Vec<Check>, Failure> {
    let d = 2;
    let top = (d * d) as f64 / (d * d - 1) as f64;
    let tol = 1e-9;
    let dep = |alpha: f64| catalog_channel(CatalogChannel::Depolarizing { d, alpha }, tol);
    let mut out = Vec::new();

    let omega = maximally_entangled_state(d);
    let low = dep(0.0)?;
    out.push(below("alpha = 0 is the identity", max_abs(&(low.choi_matrix() - &omega)), 1e-12));
    let high = dep(top)?;
    let expected = (identity(d * d) - &omega) * c64(1.0 / (d * d - 1) as f64, 0.0);
    out.push(below(
        "alpha = d^2/(d^2-1) is the normalized complement",
        max_abs(&(high.choi_matrix() - expected)),
        1e-12,
    ));

    let pairs: Vec<(ComplexMatrix, ComplexMatrix)> = random_unitaries(d, 20, seed)
        .into_iter()
        .map(|u| (u.clone(), u))
        .collect();
    let mut res: f64 = 0.0;
    for k in 0..=4 {
        let t = dep(top * k as f64 / 4.0)?;
        res = res.max(is_covariant_under_pairs(&t, &pairs, tol)?.max_residual);
    }
    out.push(below("unitary covariance across the segment", res, 1e-9));

    let rejected = matches!(dep(top + 0.01), Err(Error::OutOfRange(_))) && matches!(dep(-0.01), Err(Error::OutOfRange(_)));
    out.push(check("parameters outside the segment rejected", rejected, "alpha < 0 and alpha > d^2/(d^2-1)".into()));

    let targets = (0..=8).map(|i| dep(top * i as f64 / 8.0)).collect::<Result<Vec<_>, _>>()?;
    let rhos = random_states(d, 10, seed);
    for (name, mode) in [
        ("measure-and-prepare processor, mixed programs", ProgramMode::Mixed),
        ("measure-and-prepare processor, pure programs", ProgramMode::Pure),
    ] {
        let p = build_mp_processor(&[low.clone(), high.clone()], mode, tol)?;
        let r = verify_processor(&p, &targets, &rhos);
        out.push(check(
            name,
            p.program_dim() == 2 && r.max_error <= 1e-9,
            format!("d_P={}, max error {:.3e}", p.program_dim(), r.max_error),
        ));
    }
    Ok(out)
}
