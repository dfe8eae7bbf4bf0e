//! Subcommand implementations. Each returns the rendered payload and the
//! exit code; all parallel work runs on a pool sized by `--jobs` and is
//! collected in input order, so output does not depend on the pool size.

use log::info;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use freqmom_core::arith::{is_prime, primes_up_to, BoundMode, LevelModel, SturmConfig};
use freqmom_core::congruence::{
    certify as certify_task, certify_filtered, scan_task, CertificationRecord, Progression, ResourceLimits,
    ScanParameters, ScanReport,
};
use freqmom_core::divisorweights::{DirichletCharacterSpec, WeightSelector};
use freqmom_core::moments::{
    compute_moments, fermat_value_check, first_moment_check, ford_recursion_check, j_identity_check,
    moebius_check, tau_convolution_check, CheckReport,
};
use freqmom_core::qseries::{Ensemble, ExactInteger, IntegersMod, Ring, Series};

use crate::golden::{
    FILTERED_DISCRIMINANT, FILTERED_EMPTY_SCAN_PRIMES, FILTERED_LEVEL, FILTERED_TABLE, ORDINARY_TABLE,
    OVERPARTITION_TABLE,
};
use crate::report::{self, Format, PipelineReport, TableRow};
use crate::weightspec::{parse_weight_spec, WeightSpec};
use crate::{
    CertifyArgs, CheckChoice, CliError, DumpArgs, Globals, IdentitiesArgs, PipelineArgs, ScanArgs,
    ScanSelection, SeriesChoice, TableChoice, TablesArgs, EXIT_FAILURE, EXIT_OK,
};

type Outcome = Result<(String, i32), CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Map `f` over `items` on a pool of `jobs` threads, keeping input order.
/// The first error in input order wins.
fn par_map<T, U, F>(jobs: usize, items: &[T], f: F) -> Result<Vec<U>, CliError>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Result<U, CliError> + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| usage(format!("cannot start {jobs} workers: {e}")))?;
    pool.install(|| items.par_iter().map(&f).collect::<Vec<_>>())
        .into_iter()
        .collect()
}

fn ensemble(name: &str) -> Result<Ensemble, CliError> {
    Ok(Ensemble::from_name(name)?)
}

fn weight_spec(text: Option<&str>) -> Result<WeightSpec, CliError> {
    text.map_or_else(
        || Ok(WeightSpec::default()),
        |t| parse_weight_spec(t).map_err(usage),
    )
}

fn check_cap(needed: usize, cap: usize) -> Result<(), CliError> {
    if needed > cap {
        return Err(CliError::Resource(format!(
            "a series of {needed} coefficients exceeds the memory cap of {cap}"
        )));
    }
    Ok(())
}

struct ScanPlan {
    ensemble: Ensemble,
    selector: WeightSelector,
    m_values: Vec<u32>,
    ells: Vec<u64>,
    n_scan: usize,
    include_r0: bool,
}

fn plan_scan(s: &ScanSelection, max_coeffs: usize) -> Result<ScanPlan, CliError> {
    let ensemble = ensemble(&s.ensemble)?;
    let spec = weight_spec(s.weight.as_deref())?;
    if spec.m.is_some() {
        return Err(usage(
            "scan takes exponents from --m or --m-odd-max, not from --weight",
        ));
    }
    let mut m_values = match (&s.m, s.m_odd_max) {
        (Some(list), _) => list.clone(),
        (None, max) => (1..=max.unwrap_or(25)).step_by(2).collect(),
    };
    m_values.sort_unstable();
    m_values.dedup();
    if m_values.is_empty() {
        return Err(usage("no exponents to scan"));
    }
    if let Some(m) = m_values.iter().find(|m| *m % 2 == 0) {
        return Err(usage(format!("moment exponent must be odd, got {m}")));
    }
    let mut ells = match &s.ell {
        Some(list) => list.clone(),
        None => primes_up_to(s.ell_max)
            .iter()
            .filter(|&p| p >= s.ell_min)
            .collect(),
    };
    ells.sort_unstable();
    ells.dedup();
    if ells.is_empty() {
        return Err(usage("no primes to scan"));
    }
    if let Some(l) = ells.iter().find(|&&l| !is_prime(l)) {
        return Err(usage(format!("{l} is not prime")));
    }
    if let Some(l) = ells.iter().find(|&&l| l as usize > s.nscan) {
        return Err(usage(format!("--nscan {} is below ell = {l}", s.nscan)));
    }
    check_cap(s.nscan + 1, max_coeffs)?;
    Ok(ScanPlan {
        selector: spec.selector_for(&ensemble),
        ensemble,
        m_values,
        ells,
        n_scan: s.nscan,
        include_r0: !s.nonzero_only,
    })
}

fn run_scan(globals: &Globals, plan: &ScanPlan) -> Result<ScanReport, CliError> {
    let tasks: Vec<(u32, u64)> = plan
        .m_values
        .iter()
        .flat_map(|&m| plan.ells.iter().map(move |&l| (m, l)))
        .collect();
    info!("scanning {} tasks on {} workers", tasks.len(), globals.jobs);
    let results = par_map(globals.jobs, &tasks, |&(m, ell)| {
        info!("scan m={m} ell={ell}");
        Ok(scan_task(
            &plan.ensemble,
            &plan.selector,
            m,
            ell,
            plan.n_scan,
            plan.include_r0,
        )?)
    })?;
    Ok(ScanReport::from_results(
        ScanParameters {
            ensemble: plan.ensemble.name.clone(),
            weight: plan.selector.to_string(),
            m_values: plan.m_values.clone(),
            ells: plan.ells.clone(),
            n_scan: plan.n_scan,
            include_r0: plan.include_r0,
        },
        results,
    ))
}

pub fn scan(globals: &Globals, args: &ScanArgs) -> Outcome {
    let plan = plan_scan(&args.selection, globals.max_coeffs)?;
    let report = run_scan(globals, &plan)?;
    Ok((report::render_scan(&report, globals.format), EXIT_OK))
}

/// One certification request.
#[derive(Debug, Clone)]
struct CertTask {
    m: u32,
    prog: Progression,
    prime: u64,
    config: SturmConfig,
}

fn run_certifications(
    globals: &Globals,
    ensemble: &Ensemble,
    selector: &WeightSelector,
    tasks: &[CertTask],
) -> Result<Vec<CertificationRecord>, CliError> {
    let limits = ResourceLimits {
        max_coefficients: globals.max_coeffs,
    };
    par_map(globals.jobs, tasks, |t| {
        info!("certify m={} {} mod {} ({:?})", t.m, t.prog, t.prime, t.config);
        let w = selector.at(t.m);
        let record = if selector.is_twisted() {
            certify_filtered(ensemble, &w, t.prog, t.prime, &t.config, &limits)?
        } else {
            certify_task(ensemble, &w, t.prog, t.prime, &t.config, &limits)?
        };
        Ok(record)
    })
}

fn parse_task(s: &str) -> Result<(u32, u64, u64), CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || usage(format!("expected m:ell:r, got {s:?}"));
    let [m, ell, r] = parts.as_slice() else {
        return Err(bad());
    };
    Ok((
        m.trim().parse().map_err(|_| bad())?,
        ell.trim().parse().map_err(|_| bad())?,
        r.trim().parse().map_err(|_| bad())?,
    ))
}

fn level_models(level: LevelModel, both: bool) -> Vec<LevelModel> {
    if both {
        vec![LevelModel::Natural, LevelModel::Safe]
    } else {
        vec![level]
    }
}

fn status_code(records: &[CertificationRecord]) -> i32 {
    if records.iter().all(CertificationRecord::passed) {
        EXIT_OK
    } else {
        EXIT_FAILURE
    }
}

pub fn certify(globals: &Globals, args: &CertifyArgs) -> Outcome {
    let ensemble = ensemble(&args.ensemble)?;
    let spec = weight_spec(args.weight.as_deref())?;
    let triples = if args.task.is_empty() {
        let m = match (spec.m, args.m) {
            (Some(_), Some(_)) => return Err(usage("give the exponent in --weight or --m, not both")),
            (Some(m), None) | (None, Some(m)) => m,
            (None, None) => return Err(usage("missing exponent: pass --m or --task")),
        };
        let ell = args.ell.ok_or_else(|| usage("missing --ell"))?;
        let r = args.r.ok_or_else(|| usage("missing --r"))?;
        vec![(m, ell, r)]
    } else {
        if spec.m.is_some() {
            return Err(usage("--task supplies the exponent; drop m= from --weight"));
        }
        args.task
            .iter()
            .map(|t| parse_task(t))
            .collect::<Result<_, _>>()?
    };
    if args.prime.is_some() && triples.len() > 1 {
        return Err(usage("--prime applies to a single task"));
    }
    let mut tasks = Vec::new();
    for &(m, ell, r) in &triples {
        for model in level_models(args.level, args.both_levels) {
            tasks.push(CertTask {
                m,
                prog: Progression::new(ell, r)?,
                prime: args.prime.unwrap_or(ell),
                config: SturmConfig::new(args.mode.into(), model),
            });
        }
    }
    let records = run_certifications(globals, &ensemble, &spec.selector_for(&ensemble), &tasks)?;
    Ok((
        report::render_records(&records, globals.format),
        status_code(&records),
    ))
}

pub fn pipeline(globals: &Globals, args: &PipelineArgs) -> Outcome {
    let plan = plan_scan(&args.selection, globals.max_coeffs)?;
    let scan = run_scan(globals, &plan)?;
    let config = SturmConfig::new(args.mode.into(), args.level);
    let tasks = scan
        .triples()
        .into_iter()
        .map(|(m, ell, r)| {
            Ok(CertTask {
                m,
                prog: Progression::new(ell, r)?,
                prime: ell,
                config,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let certifications = run_certifications(globals, &plan.ensemble, &plan.selector, &tasks)?;
    let code = status_code(&certifications);
    let report = PipelineReport { scan, certifications };
    Ok((report::render_pipeline(&report, globals.format), code))
}

fn table_row(
    table: &str,
    record: &CertificationRecord,
    bound: u64,
    max_index: Option<u64>,
    note: &str,
) -> TableRow {
    let matches =
        record.passed() && record.bound_b == bound && max_index.is_none_or(|x| x == record.max_index_checked);
    TableRow {
        table: table.to_string(),
        m: record.m,
        ell: record.ell,
        r: record.r,
        prime: record.modulus,
        level_l: Some(record.level_l),
        model: record.model.clone(),
        expected_bound: Some(bound),
        bound: Some(record.bound_b),
        expected_max_index: max_index,
        max_index: Some(record.max_index_checked),
        expected_status: "PASS".into(),
        status: record.status.to_string(),
        note: note.to_string(),
        matches,
    }
}

enum TableJob {
    Ordinary(usize),
    Overpartition(usize),
    Filtered(usize),
    FilteredScan(u64),
}

fn run_table_job(job: &TableJob, limits: &ResourceLimits) -> Result<TableRow, CliError> {
    let chi5 = WeightSelector::Character(DirichletCharacterSpec::Kronecker(FILTERED_DISCRIMINANT));
    match *job {
        TableJob::Ordinary(i) => {
            let row = ORDINARY_TABLE[i];
            let config = SturmConfig::new(BoundMode::Sharp24, row.level_model);
            let e = Ensemble::ordinary();
            let w = WeightSelector::canonical_for(&e).at(row.m);
            let rec = certify_task(
                &e,
                &w,
                Progression::new(row.ell, row.r)?,
                row.prime,
                &config,
                limits,
            )?;
            let mut t = table_row("ordinary", &rec, row.bound, Some(row.max_index), "");
            t.matches &= t.level_l == Some(row.level_l);
            Ok(t)
        }
        TableJob::Overpartition(i) => {
            let (m, ell, bound, max_index) = OVERPARTITION_TABLE[i];
            let e = Ensemble::overpartition();
            let w = WeightSelector::canonical_for(&e).at(m);
            let config = SturmConfig::new(BoundMode::Conservative12, LevelModel::Safe);
            let rec = certify_task(&e, &w, Progression::new(ell, 0)?, ell, &config, limits)?;
            Ok(table_row("overpartition", &rec, bound, Some(max_index), ""))
        }
        TableJob::Filtered(i) => {
            let row = FILTERED_TABLE[i];
            let config = SturmConfig::new(BoundMode::Sharp24, LevelModel::Safe);
            let prog = Progression::new(5, 4)?;
            let rec = certify_filtered(&Ensemble::ordinary(), &chi5.at(row.m), prog, 5, &config, limits)?;
            let note = if row.derived {
                "bound derived from the formula"
            } else {
                ""
            };
            let mut t = table_row("filtered", &rec, row.bound, None, note);
            t.matches &= rec.level == FILTERED_LEVEL;
            Ok(t)
        }
        TableJob::FilteredScan(ell) => {
            let hit = scan_task(&Ensemble::ordinary(), &chi5, 3, ell, 2000, true)?;
            Ok(TableRow {
                table: "filtered".into(),
                m: 3,
                ell,
                r: 0,
                prime: ell,
                level_l: None,
                model: "scan n<=2000".into(),
                expected_bound: None,
                bound: None,
                expected_max_index: None,
                max_index: None,
                expected_status: "no hit".into(),
                status: if hit.residues.is_empty() {
                    "no hit".into()
                } else {
                    let rs: Vec<String> = hit.residues.iter().map(u64::to_string).collect();
                    format!("hit r={}", rs.join("/"))
                },
                note: "twisted scan over all residues".into(),
                matches: hit.residues.is_empty(),
            })
        }
    }
}

pub fn tables(globals: &Globals, args: &TablesArgs) -> Outcome {
    let want = |t: TableChoice| args.which == t || args.which == TableChoice::All;
    let mut jobs = Vec::new();
    if want(TableChoice::Ordinary) {
        jobs.extend((0..ORDINARY_TABLE.len()).map(TableJob::Ordinary));
    }
    if want(TableChoice::Overpartition) {
        jobs.extend((0..OVERPARTITION_TABLE.len()).map(TableJob::Overpartition));
    }
    if want(TableChoice::Filtered) {
        jobs.extend((0..FILTERED_TABLE.len()).map(TableJob::Filtered));
        jobs.extend(
            FILTERED_EMPTY_SCAN_PRIMES
                .iter()
                .map(|&l| TableJob::FilteredScan(l)),
        );
    }
    let limits = ResourceLimits {
        max_coefficients: globals.max_coeffs,
    };
    let rows = par_map(globals.jobs, &jobs, |j| run_table_job(j, &limits))?;
    let code = if rows.iter().all(|r| r.matches) {
        EXIT_OK
    } else {
        EXIT_FAILURE
    };
    Ok((report::render_tables(&rows, globals.format), code))
}

#[derive(Debug, Clone)]
enum CheckJob {
    Ford(usize),
    Moebius(usize),
    M1(String, usize),
    Fermat(String, Vec<(u32, u64, usize)>),
    Tau(usize),
    J(usize),
}

/// Reproducible `(m, ℓ, n)` samples: odd `m ≤ 49`, prime `5 ≤ ℓ ≤ 31`, `n ≤ n_max`.
pub fn fermat_samples(seed: u64, count: usize, n_max: usize) -> Vec<(u32, u64, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ells: Vec<u64> = primes_up_to(31).iter().filter(|&p| p >= 5).collect();
    (0..count)
        .map(|_| {
            let m = 2 * rng.gen_range(0..25u32) + 1;
            let ell = *ells.choose(&mut rng).expect("nonempty");
            (m, ell, rng.gen_range(0..=n_max))
        })
        .collect()
}

fn run_check(job: &CheckJob) -> Result<CheckReport, CliError> {
    info!("identity check {job:?}");
    Ok(match job {
        CheckJob::Ford(n) => ford_recursion_check(*n)?,
        CheckJob::Moebius(n) => moebius_check(*n)?,
        CheckJob::M1(e, n) => first_moment_check(&ensemble(e)?, *n)?,
        CheckJob::Fermat(e, samples) => fermat_value_check(&ensemble(e)?, samples)?,
        CheckJob::Tau(n) => tau_convolution_check(*n)?,
        CheckJob::J(n) => j_identity_check(*n)?,
    })
}

pub fn identities(globals: &Globals, args: &IdentitiesArgs) -> Outcome {
    let all = args.check.contains(&CheckChoice::All);
    let want = |c: CheckChoice| all || args.check.contains(&c);
    let ensembles: Vec<String> = match &args.ensemble {
        Some(name) => {
            ensemble(name)?;
            vec![name.clone()]
        }
        None => vec!["ordinary".into(), "overpartition".into()],
    };
    let depth = |default: usize| args.n.unwrap_or(default);
    let mut jobs = Vec::new();
    if want(CheckChoice::Ford) {
        jobs.push(CheckJob::Ford(depth(500)));
    }
    if want(CheckChoice::Moebius) {
        jobs.push(CheckJob::Moebius(depth(40)));
    }
    if want(CheckChoice::M1) {
        jobs.extend(ensembles.iter().map(|e| CheckJob::M1(e.clone(), depth(2000))));
    }
    if want(CheckChoice::Fermat) {
        let samples = fermat_samples(args.seed, args.samples, depth(500));
        jobs.extend(
            ensembles
                .iter()
                .map(|e| CheckJob::Fermat(e.clone(), samples.clone())),
        );
    }
    if want(CheckChoice::Tau691) {
        jobs.push(CheckJob::Tau(depth(300)));
    }
    if want(CheckChoice::J) {
        jobs.push(CheckJob::J(depth(40)));
    }
    let reports = par_map(globals.jobs, &jobs, run_check)?;
    let code = if reports.iter().all(CheckReport::passed) {
        EXIT_OK
    } else {
        EXIT_FAILURE
    };
    Ok((report::render_checks(&reports, globals.format), code))
}

fn render_series<R: Ring>(series: &Series<R>, ensemble: &str, format: Format) -> String {
    match format {
        Format::Text => {
            let mut buf = Vec::new();
            series.write_dump(ensemble, &mut buf).expect("in-memory write");
            String::from_utf8(buf).expect("decimal digits")
        }
        Format::Csv => {
            let mut out = String::from("n,coefficient\n");
            for (i, c) in series.coeffs().iter().enumerate() {
                out.push_str(&format!("{i},{c}\n"));
            }
            out
        }
        Format::Json => {
            let value = serde_json::json!({
                "ring": series.ring().descriptor().to_string(),
                "N": series.truncation(),
                "ensemble": ensemble,
                "coefficients": series.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            });
            let mut s = serde_json::to_string_pretty(&value).expect("json");
            s.push('\n');
            s
        }
    }
}

fn dump_in<R: Ring>(args: &DumpArgs, e: &Ensemble, ring: &R, format: Format) -> Result<String, CliError> {
    let series = match args.series {
        SeriesChoice::Companion => {
            if args.weight.is_some() {
                return Err(usage("--weight applies to moment dumps only"));
            }
            e.companion_series(args.n, ring)?
        }
        SeriesChoice::Moments => {
            let spec = weight_spec(args.weight.as_deref())?;
            let m = spec
                .m
                .ok_or_else(|| usage("moment dumps need --weight m=<odd>"))?;
            compute_moments(e, &spec.weight_for(e, m), args.n, ring)?.values
        }
    };
    Ok(render_series(&series, &e.name, format))
}

pub fn dump_series(globals: &Globals, args: &DumpArgs) -> Outcome {
    let e = ensemble(&args.ensemble)?;
    check_cap(args.n + 1, globals.max_coeffs)?;
    let payload = match args.ring.as_str() {
        "zz" => dump_in(args, &e, &ExactInteger, globals.format)?,
        other => {
            let p = other
                .strip_prefix("mod:")
                .and_then(|p| p.parse::<u64>().ok())
                .ok_or_else(|| usage(format!("expected zz or mod:p, got {other:?}")))?;
            dump_in(args, &e, &IntegersMod::new(p)?, globals.format)?
        }
    };
    Ok((payload, EXIT_OK))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fermat_samples_are_reproducible() {
        let a = fermat_samples(7, 20, 300);
        assert_eq!(a, fermat_samples(7, 20, 300));
        assert_ne!(a, fermat_samples(8, 20, 300));
        assert!(a
            .iter()
            .all(|&(m, ell, n)| m % 2 == 1 && m <= 49 && is_prime(ell) && ell >= 5 && n <= 300));
    }

    #[test]
    fn task_parsing() {
        assert_eq!(parse_task("3:7:5").unwrap(), (3, 7, 5));
        assert!(parse_task("3:7").is_err());
        assert!(parse_task("a:7:5").is_err());
    }

    #[test]
    fn par_map_keeps_order() {
        let items: Vec<u64> = (0..100).collect();
        let out = par_map(8, &items, |&x| Ok(x * x)).unwrap();
        assert_eq!(out, items.iter().map(|x| x * x).collect::<Vec<_>>());
        let err = par_map(
            4,
            &items,
            |&x| if x >= 10 { Err(usage(x.to_string())) } else { Ok(x) },
        );
        assert!(matches!(err, Err(CliError::Usage(s)) if s == "10"));
    }
}
