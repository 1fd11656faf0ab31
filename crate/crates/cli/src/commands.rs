use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde_json::json;

use mvop_core::bispec::{algebra_search, construct_operator, verify_bispectral, EigenSeq, RightDiffOp, SearchConfig};
use mvop_core::blockop::{
    ad_bracket_power, darboux_factorize, darboux_transform, intertwine_check, BandedBlock, BlockTridiag, EntryLocation,
};
use mvop_core::exact::rational::format_rational;
use mvop_core::exact::Rational;
use mvop_core::mop::recurrence_from_moments;
use mvop_core::weights::{gegenbauer02_operator, moments, wtilde_weight, MomentSeq, Normalization, Weight, WeightKind};

use crate::io::{emit, read_alpha0, read_json, CliError, CliResult};
use crate::report::{Detail, InputsHash, Meta, Report};

/// Whether a command's check passed; data-producing commands always pass.
pub enum Status {
    Pass,
    Fail,
}

impl From<bool> for Status {
    fn from(pass: bool) -> Self {
        if pass {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

fn meta(hash: InputsHash, levels: Option<usize>, counts: &[(&str, usize)]) -> Meta {
    Meta {
        inputs_hash: hash.finish(),
        levels,
        counts: counts.iter().map(|(k, v)| (k.to_string(), *v)).collect::<BTreeMap<_, _>>(),
    }
}

fn finish_report(report: Report, path: Option<&Path>) -> CliResult<Status> {
    log::info!("{}: {}", report.check, if report.pass { "pass" } else { "fail" });
    let pass = report.pass;
    emit(&report, path)?;
    Ok(pass.into())
}

fn entry_detail(e: &EntryLocation) -> Detail {
    Detail {
        location: format!("block ({}, {}) entry ({}, {})", e.block_row, e.block_col, e.row, e.col),
        expected: "0".into(),
        actual: format_rational(&e.value),
    }
}

/// Applies the `--delta-sign` override and picks the default normalization:
/// relative without point masses, absolute with them.
fn prepare_weight(
    w: Weight,
    delta_sign: Option<i8>,
    normalization: Option<Normalization>,
) -> CliResult<(Weight, Normalization)> {
    let w = match (delta_sign, w.kind().clone()) {
        (Some(sign), WeightKind::DarbouxGegenbauer02 { lambda, alpha0, .. }) => wtilde_weight(lambda, &alpha0, sign)?,
        (Some(_), _) => {
            return Err(CliError::Usage(
                "--delta-sign applies only to darboux_gegenbauer02 weights".into(),
            ))
        }
        (None, _) => w,
    };
    let norm = normalization.unwrap_or(if w.deltas().is_empty() {
        Normalization::Relative
    } else {
        Normalization::Absolute
    });
    Ok((w, norm))
}

pub fn moments_cmd(
    weight: &Path,
    count: usize,
    normalization: Option<Normalization>,
    delta_sign: Option<i8>,
    out: Option<&Path>,
) -> CliResult<Status> {
    let mut hash = InputsHash::default();
    let w: Weight = read_json(weight, &mut hash)?;
    let (w, norm) = prepare_weight(w, delta_sign, normalization)?;
    let mu = moments(&w, count, norm)?;
    emit(&mu, out)?;
    Ok(Status::Pass)
}

pub fn recurrence_cmd(
    weight: &Path,
    levels: usize,
    normalization: Option<Normalization>,
    delta_sign: Option<i8>,
    out: Option<&Path>,
) -> CliResult<Status> {
    let mut hash = InputsHash::default();
    let w: Weight = read_json(weight, &mut hash)?;
    let (w, norm) = prepare_weight(w, delta_sign, normalization)?;
    let mu: MomentSeq = moments(&w, 2 * levels + 1, norm)?;
    let l = recurrence_from_moments(&mu, levels)?;
    emit(&l, out)?;
    Ok(Status::Pass)
}

pub fn gegenbauer_cmd(lambda: &Rational, levels: usize, out: Option<&Path>) -> CliResult<Status> {
    emit(&gegenbauer02_operator(lambda, levels)?, out)?;
    Ok(Status::Pass)
}

pub fn darboux_cmd(
    op: &Path,
    alpha0: &Path,
    out: Option<&Path>,
    factors: Option<&Path>,
    beta_out: Option<&Path>,
) -> CliResult<Status> {
    let mut hash = InputsHash::default();
    let l0: BlockTridiag = read_json(op, &mut hash)?;
    let a0 = read_alpha0(alpha0, &mut hash)?;
    let f = darboux_factorize(&l0, &a0)?;
    let l = darboux_transform(&f)?;
    if let Some(p) = factors {
        emit(&f, Some(p))?;
    }
    if let Some(p) = beta_out {
        emit(&f.beta_matrix(), Some(p))?;
    }
    emit(&l, out)?;
    Ok(Status::Pass)
}

pub fn verify_cmd(op: &Path, diffop: &Path, eigen: &Path, n: usize, report: Option<&Path>) -> CliResult<Status> {
    let mut hash = InputsHash::default();
    let l: BlockTridiag = read_json(op, &mut hash)?;
    let d: RightDiffOp = read_json(diffop, &mut hash)?;
    let lam: EigenSeq = read_json(eigen, &mut hash)?;
    hash.param("n", n);
    let rep = verify_bispectral(&l, &d, &lam, n)?;
    let details = rep
        .failures
        .iter()
        .map(|f| Detail {
            location: format!("n = {}, degree {}, entry ({}, {})", f.n, f.degree, f.row, f.col),
            expected: format_rational(&f.rhs),
            actual: format_rational(&f.lhs),
        })
        .collect();
    let m = meta(hash, Some(l.levels()), &[("checked", rep.checked)]);
    finish_report(Report::new("verify", details, m), report)
}

pub fn search_cmd(
    op: &Path,
    config: SearchConfig,
    report: Option<&Path>,
    basis_out: Option<&Path>,
) -> CliResult<Status> {
    let mut hash = InputsHash::default();
    let l: BlockTridiag = read_json(op, &mut hash)?;
    hash.param("max_order", config.max_order);
    hash.param("n_train", config.n_train);
    hash.param("n_verify", config.n_verify);
    log::info!(
        "searching orders <= {} with n_train = {}, n_verify = {}",
        config.max_order,
        config.n_train,
        config.n_verify
    );
    let r = algebra_search(&l, config)?;
    println!("{:>5} {:>5} {:>5}", "order", "d", "new");
    for s in 0..=r.max_order {
        println!("{s:>5} {:>5} {:>5}", r.dims[s], r.new[s]);
    }
    match r.minimal_nontrivial_order {
        Some(s) => println!("minimal nontrivial order: {s}"),
        None => println!("minimal nontrivial order: none up to {}", r.max_order),
    }
    let mut details: Vec<Detail> = r
        .verify_shrinks
        .iter()
        .map(|s| Detail {
            location: format!("verification at n = {}", s.n),
            expected: format!("{:?}", s.before),
            actual: format!("{:?}", s.after),
        })
        .collect();
    if let Some(stab) = &r.dims_stabilization {
        if stab != &r.dims_trained {
            details.push(Detail {
                location: format!("stabilization at n_train + 3 = {}", r.n_train + 3),
                expected: format!("{:?}", r.dims_trained),
                actual: format!("{stab:?}"),
            });
        }
    }
    if let Some(p) = basis_out {
        emit(&r.basis, Some(p))?;
    }
    let m = meta(
        hash,
        Some(l.levels()),
        &[("max_order", r.max_order), ("n_train", r.n_train), ("n_verify", r.n_verify)],
    );
    let result = json!({
        "dims": r.dims,
        "new": r.new,
        "dims_trained": r.dims_trained,
        "dims_stabilization": r.dims_stabilization,
        "minimal_nontrivial_order": r.minimal_nontrivial_order,
    });
    let rep = Report::new("search", details, m).with_result(result);
    let pass = rep.pass;
    if let Some(p) = report {
        emit(&rep, Some(p))?;
    }
    Ok(pass.into())
}

pub fn adcheck_cmd(
    op: &Path,
    eigen: &Path,
    power: usize,
    levels: Option<usize>,
    report: Option<&Path>,
) -> CliResult<Status> {
    let mut hash = InputsHash::default();
    let l: BlockTridiag = read_json(op, &mut hash)?;
    let lam: EigenSeq = read_json(eigen, &mut hash)?;
    let k = levels.unwrap_or(l.levels());
    hash.param("power", power);
    hash.param("levels", k);
    if k > l.levels() {
        return Err(mvop_core::Error::InsufficientLevels {
            needed: k,
            available: l.levels(),
        }
        .into());
    }
    let l = l.truncate(k)?;
    let x = ad_bracket_power(&l, &lam.values(k)?, power)?;
    let details = x.first_nonzero_in_window().iter().map(entry_detail).collect();
    let m = meta(hash, Some(k), &[("power", power), ("window", x.exact_window())]);
    finish_report(Report::new("adcheck", details, m), report)
}

pub fn construct_cmd(op: &Path, eigen: &Path, order: usize, out: Option<&Path>) -> CliResult<Status> {
    let mut hash = InputsHash::default();
    let l: BlockTridiag = read_json(op, &mut hash)?;
    let lam: EigenSeq = read_json(eigen, &mut hash)?;
    emit(&construct_operator(&l, &lam, order)?, out)?;
    Ok(Status::Pass)
}

pub fn intertwine_cmd(u: &Path, l0: &Path, l: &Path, report: Option<&Path>) -> CliResult<Status> {
    let mut hash = InputsHash::default();
    let u: BandedBlock = read_json(u, &mut hash)?;
    let l0: BlockTridiag = read_json(l0, &mut hash)?;
    let l: BlockTridiag = read_json(l, &mut hash)?;
    let rep = intertwine_check(&u, &l0, &l)?;
    let details = rep.first_offending.iter().map(entry_detail).collect();
    let m = meta(hash, Some(l.levels()), &[("window", rep.window)]);
    finish_report(Report::new("intertwine", details, m), report)
}

pub fn out_path(p: &Option<PathBuf>) -> Option<&Path> {
    p.as_deref()
}
