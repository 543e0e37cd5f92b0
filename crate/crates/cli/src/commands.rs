//! Subcommand implementations.

use nalgebra::DMatrix;
use rayon::prelude::*;
use solgeo_core::lattice::{build_manifold, fiber_translation_group_order, ManifoldKind, SolManifold};
use solgeo_core::{census, cz, flow, linearized};

use crate::manifest::{
    parse_classes, parse_manifest, parse_matrix_arg, parse_triple, CurveManifest,
    ManifoldManifest, StateManifest,
};
use crate::output::{
    emit, CensusOut, ChooseScaleOut, CrossingOut, CurveOut, EigenvalueOut, EulerOut, FlowOut,
    Format, HomologyOut, IndexOut, MonodromyOut, PeriodicOut, TrajectoryRow, VerifyBoundOut,
};
use crate::{CliError, ManifoldArgs, StateArgs};

struct ManifoldInput {
    manifold: SolManifold,
    manifest: Option<ManifoldManifest>,
}

fn resolve_manifold(args: &ManifoldArgs) -> Result<ManifoldInput, CliError> {
    if let Some(path) = &args.manifest {
        let mf: ManifoldManifest = parse_manifest(path)?;
        let manifold = mf.build()?;
        return Ok(ManifoldInput { manifold, manifest: Some(mf) });
    }
    let matrix = args
        .matrix
        .as_deref()
        .ok_or_else(|| CliError::Validation(String::from("pass --matrix or --manifest")))?;
    let matrix = parse_matrix_arg(matrix)?;
    let kind = match args.kind.as_deref() {
        None | Some("suspension") => ManifoldKind::Suspension,
        Some("sapphire") => ManifoldKind::Sapphire,
        Some(other) => {
            return Err(CliError::Validation(format!(
                "kind must be suspension or sapphire, not `{other}`"
            )))
        }
    };
    let manifold = build_manifold(matrix, args.scale.unwrap_or(1.0), kind)?;
    Ok(ManifoldInput { manifold, manifest: None })
}

fn resolve_state(args: &StateArgs) -> Result<(flow::PhaseState, f64, f64, usize), CliError> {
    if let Some(path) = &args.manifest {
        let mf: StateManifest = parse_manifest(path)?;
        let mut state =
            flow::PhaseState::new(solgeo_core::SolElement::new(mf.position[0], mf.position[1], mf.position[2]), mf.momentum);
        if mf.normalize {
            state = state.normalize()?;
        }
        let time = args.time.unwrap_or(mf.time);
        let tol = args.tol.unwrap_or(mf.tol);
        return Ok((state, time, tol, mf.samples));
    }
    let position = parse_triple(
        args.position
            .as_deref()
            .ok_or_else(|| CliError::Validation(String::from("pass --position or --manifest")))?,
    )?;
    let momentum = parse_triple(
        args.momentum
            .as_deref()
            .ok_or_else(|| CliError::Validation(String::from("pass --momentum or --manifest")))?,
    )?;
    let mut state = flow::PhaseState::new(
        solgeo_core::SolElement::new(position[0], position[1], position[2]),
        momentum,
    );
    if args.normalize {
        state = state.normalize()?;
    }
    let time = args
        .time
        .ok_or_else(|| CliError::Validation(String::from("pass --time")))?;
    Ok((state, time, args.tol.unwrap_or(1e-10), 100))
}

pub fn homology(format: Format, args: &ManifoldArgs) -> Result<(), CliError> {
    let input = resolve_manifold(args)?;
    let report = input.manifold.homology()?;
    let monodromy = input.manifold.monodromy();
    let out = HomologyOut {
        matrix: monodromy.a,
        h0: report.group_string(0),
        h1: report.group_string(1),
        h2: report.group_string(2),
        h3: report.group_string(3),
        invariant_factors: report.h.clone(),
        torsion_order_h1: report.torsion_order_h1(),
        fiber_translation_group_order: fiber_translation_group_order(monodromy)?,
    };
    emit(format, &out, || out.csv())
}

pub fn census(
    format: Format,
    args: &ManifoldArgs,
    cutoff: Option<f64>,
    periods: Option<u32>,
    jobs: Option<usize>,
) -> Result<(), CliError> {
    let input = resolve_manifold(args)?;
    let cutoff = cutoff
        .or(input.manifest.as_ref().and_then(|m| m.cutoff))
        .ok_or_else(|| CliError::Validation(String::from("pass --cutoff")))?;
    let periods = periods.or(input.manifest.as_ref().and_then(|m| m.periods)).unwrap_or(0);
    let man = &input.manifold;

    let mut a_records = match jobs {
        Some(jobs) if jobs > 1 => {
            let (m_max, n_max) = census::census_search_box(man, cutoff)?;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build()
                .map_err(|e| CliError::Numerical(e.to_string()))?;
            let rows: Result<Vec<_>, solgeo_core::SolError> = pool.install(|| {
                (-m_max..=m_max)
                    .into_par_iter()
                    .map(|m| {
                        let mut rows = Vec::new();
                        for n in -n_max..=n_max {
                            if let Some(rec) = census::census_record(man, cutoff, (m, n))? {
                                rows.push(rec);
                            }
                        }
                        Ok(rows)
                    })
                    .try_reduce(Vec::new, |mut acc, mut rows| {
                        acc.append(&mut rows);
                        Ok(acc)
                    })
            });
            rows?
        }
        _ => census::type_a_census(man, cutoff)?,
    };
    census::sort_census(&mut a_records);

    let mut b_records = Vec::new();
    if periods > 0 {
        let lambda = man.monodromy().lambda;
        for rec in census::type_b_census(man.monodromy().a, periods)? {
            let len = rec.period as f64 * lambda;
            b_records.push((rec, len));
        }
    }
    let out = CensusOut::new(man.scale(), cutoff, &a_records, &b_records);
    emit(format, &out, || out.csv())
}

pub fn periodic(format: Format, args: &ManifoldArgs, n: Option<u32>) -> Result<(), CliError> {
    let input = resolve_manifold(args)?;
    let n = n
        .or(input.manifest.as_ref().and_then(|m| m.n))
        .ok_or_else(|| CliError::Validation(String::from("pass --n")))?;
    let a = input.manifold.monodromy().a;
    let count = census::type_b_count(a, n)?;
    let points = census::enumerate_periodic_points(a, n)?;
    let out = PeriodicOut {
        matrix: a,
        n,
        count,
        points: points
            .iter()
            .map(|p| {
                format!("{}/{};{}/{}", p[0].num, p[0].den, p[1].num, p[1].den)
            })
            .collect(),
    };
    emit(format, &out, || out.csv())
}

pub fn flow(format: Format, args: &StateArgs, samples: Option<usize>) -> Result<(), CliError> {
    let (state, time, tol, manifest_samples) = resolve_state(args)?;
    let samples = samples.unwrap_or(manifest_samples).max(1);
    let traj = flow::flow(&state, time, tol)?;
    let mut rows = Vec::with_capacity(samples + 1);
    for (t, s) in traj.sample(samples) {
        rows.push(TrajectoryRow::from_state(t, &s)?);
    }
    let out = FlowOut { rows };
    emit(format, &out, || out.csv())
}

pub fn monodromy(format: Format, args: &StateArgs) -> Result<(), CliError> {
    let (state, time, tol, _) = resolve_state(args)?;
    let m = linearized::monodromy(&state, time, tol)?;
    let flatm: Vec<f64> = m.matrix.iter().flat_map(|r| r.iter().copied()).collect();
    let eig = DMatrix::from_row_slice(6, 6, &flatm).complex_eigenvalues();
    let mut eigenvalues: Vec<EigenvalueOut> =
        eig.iter().map(|c| EigenvalueOut { re: c.re, im: c.im }).collect();
    eigenvalues.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
    let out = MonodromyOut {
        time,
        matrix: m.matrix,
        eigenvalues,
        trace: m.trace(),
        det: m.det(),
        symplectic_defect: m.symplectic_defect()?,
    };
    emit(format, &out, || out.csv())
}

#[allow(clippy::too_many_arguments)]
pub fn index(
    format: Format,
    rotation_speed: Option<f64>,
    hyperbolic: bool,
    bott: Option<String>,
    delta: Option<f64>,
    type_a_length: Option<f64>,
    time: Option<f64>,
    samples: usize,
) -> Result<(), CliError> {
    let need_time =
        || time.ok_or_else(|| CliError::Validation(String::from("pass --time for this path")));
    let (kind, outcome) = if let Some(omega) = rotation_speed {
        let path = cz::SymplecticPath::rotation(omega, need_time()?, samples)?;
        (format!("rotation({omega})"), cz::cz_index_detailed(&path)?)
    } else if hyperbolic {
        let path = cz::SymplecticPath::hyperbolic(need_time()?, samples)?;
        (String::from("hyperbolic"), cz::cz_index_detailed(&path)?)
    } else if let Some(spec) = bott {
        let entries = crate::manifest::parse_matrix_entries4(&spec)?;
        let s = [[entries[0], entries[1]], [entries[2], entries[3]]];
        let idx = cz::bott_perturbed_index(&s, need_time()?, delta.unwrap_or(1e-3))?;
        (String::from("bott"), cz::CzOutcome { index: idx, crossings: Vec::new() })
    } else if let Some(len) = type_a_length {
        let closed = cz::morse_bott_type_a(len)?;
        let path = cz::SymplecticPath::type_a_rotation_block(len, samples)?;
        let detailed = cz::cz_index_detailed(&path)?;
        if detailed.index != closed {
            return Err(CliError::Numerical(format!(
                "crossing count {} disagrees with closed form {closed}",
                detailed.index
            )));
        }
        (format!("type-A length {len}"), detailed)
    } else {
        return Err(CliError::Validation(String::from(
            "pass one of --rotation-speed, --hyperbolic, --bott, --type-a-length",
        )));
    };
    let out = IndexOut {
        kind,
        index: outcome.index,
        crossings: outcome.crossings.iter().map(|c| CrossingOut { t: c.t, sign: c.sign }).collect(),
    };
    emit(format, &out, || out.csv())
}

pub fn verify_bound(format: Format, grid: usize, quad_tol: f64) -> Result<(), CliError> {
    if !(quad_tol > 0.0) {
        return Err(CliError::Validation(String::from("quadrature tolerance must be positive")));
    }
    if grid < 2 {
        return Err(CliError::Validation(String::from("grid needs at least 2 points")));
    }
    let mut min_value = f64::INFINITY;
    let mut argmin_k = 0.0;
    let mut min_e = f64::INFINITY;
    let mut max_k_sqrt = f64::NEG_INFINITY;
    for i in 0..grid {
        let k = i as f64 / (grid - 1) as f64;
        let v = census::elliptic_length_with_tol(k, quad_tol)?;
        if v < min_value {
            min_value = v;
            argmin_k = k;
        }
        if k < 1.0 {
            let e = census::complete_elliptic_e_with_tol(k, quad_tol)?;
            let kk = census::complete_elliptic_k_with_tol(k, quad_tol)?;
            min_e = min_e.min(e);
            max_k_sqrt = max_k_sqrt.max(kk * (1.0 - k * k).sqrt());
        }
    }
    let out = VerifyBoundOut {
        grid,
        min_value,
        argmin_k,
        min_e,
        max_k_times_sqrt: max_k_sqrt,
        floor: census::FOUR_MINUS_PI,
        bound_satisfied: min_value >= census::FOUR_MINUS_PI
            && min_e >= 1.0
            && max_k_sqrt <= std::f64::consts::FRAC_PI_2 + 1e-9,
    };
    if !out.bound_satisfied {
        emit(format, &out, || out.csv())?;
        return Err(CliError::Numerical(String::from("elliptic bound violated")));
    }
    emit(format, &out, || out.csv())
}

pub fn curve(format: Format, manifest: &str, n0: Option<u32>) -> Result<(), CliError> {
    let mf: CurveManifest = parse_manifest(manifest)?;
    let tree = mf.to_tree();
    let string_like = solgeo_core::curves::is_string_like(&tree)?;
    let report = solgeo_core::curves::freedom_budget(&tree)?;
    let forest = tree.inside_forest();
    let leaves = {
        let mut valence = vec![0usize; forest.vertex_count];
        for &(a, b) in &forest.edges {
            valence[a] += 1;
            valence[b] += 1;
        }
        valence.iter().filter(|&&v| v == 1).count() as u32
    };
    let euler = solgeo_core::curves::euler_vertex_bound(&forest, n0.or(mf.n0).unwrap_or(leaves))?;
    let out = CurveOut {
        string_like,
        component_indices: report.per_component.clone(),
        total_index: report.total_index,
        freedom_budget: report.freedom_budget,
        required_constraints: report.required_constraints,
        identity_gap: report.identity_gap,
        rigid: report.is_rigid(),
        status: format!("{:?}", report.status),
        inside_euler: EulerOut {
            vertices: euler.vertices,
            edges: euler.edges,
            trees: euler.trees,
            leaves: euler.leaves,
            branch_vertices: euler.branch_vertices,
            branch_excess: euler.branch_excess,
            euler_identity_holds: euler.euler_identity_holds,
            chain_holds: euler.chain_holds,
        },
    };
    emit(format, &out, || out.csv())
}

pub fn choose_scale(
    format: Format,
    args: &ManifoldArgs,
    classes: Option<&str>,
) -> Result<(), CliError> {
    let input = resolve_manifold(args)?;
    let classes: Vec<(i64, i64)> = if let Some(spec) = classes {
        parse_classes(spec)?
    } else {
        input
            .manifest
            .as_ref()
            .and_then(|m| m.classes.as_ref())
            .map(|cs| cs.iter().map(|c| (c[0], c[1])).collect())
            .ok_or_else(|| CliError::Validation(String::from("pass --classes")))?
    };
    let eps = census::choose_scale(&input.manifold, &classes)?;
    let out = ChooseScaleOut {
        epsilon: eps,
        max_base_length: census::FOUR_MINUS_PI / eps,
        classes: classes.iter().map(|(m, n)| format!("{m}:{n}")).collect(),
    };
    emit(format, &out, || out.csv())
}

