//! Expansion of a verify request into `(check, n)` tasks and their execution.

use std::str::FromStr;
use std::sync::atomic::{AtomicBool, Ordering};

use qcong::checks::{
    chain_steps, classical_check, qpow_lemma_exponents, resolve, CheckError, CheckId, CheckResult,
    ClassicalParams, Registered, Verifier, CARLITZ_A_GRID, CARLITZ_B_GRID,
};
use qcong::cyclotomic::is_prime;
use qcong::qseries::MonomialParam;
use rayon::prelude::*;

/// Inclusive range of positive integers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NRange {
    pub start: u64,
    pub end: u64,
}

impl FromStr for NRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let num = |t: &str| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| format!("bad range bound {t:?}"))
        };
        let (start, end) = if let Some((a, b)) = s.split_once("..=") {
            (num(a)?, num(b)?)
        } else if let Some((a, b)) = s.split_once("..") {
            let b = num(b)?;
            if b == 0 {
                return Err(format!("empty range {s:?}"));
            }
            (num(a)?, b - 1)
        } else {
            let v = num(s)?;
            (v, v)
        };
        if start == 0 {
            return Err("range endpoints must be at least 1".into());
        }
        if start > end {
            return Err(format!("empty range {s:?}"));
        }
        Ok(NRange { start, end })
    }
}

impl NRange {
    fn odd(self) -> impl Iterator<Item = u64> {
        (self.start..=self.end).filter(|n| n % 2 == 1)
    }
}

/// Optional per-check parameters from the command line.
#[derive(Clone, Debug, Default)]
pub struct Params {
    pub power: Option<u32>,
    pub d: Option<i64>,
    pub s: Option<i64>,
    pub k: Option<u64>,
    pub p: Option<u64>,
    pub r: Option<u32>,
    pub a: Option<MonomialParam>,
    pub b: Option<MonomialParam>,
    pub base_power: Option<u64>,
}

/// One unit of work.
#[derive(Clone, Debug, PartialEq)]
pub enum Task {
    Series {
        id: CheckId,
        n: u64,
        m: u32,
    },
    Step {
        id: CheckId,
        n: u64,
        k: Option<u64>,
    },
    Carlitz {
        n: u64,
        a: MonomialParam,
        b: MonomialParam,
        s: u64,
    },
    Classical(ClassicalParams),
}

impl Task {
    fn run(&self, v: &Verifier) -> Result<CheckResult, CheckError> {
        match *self {
            Task::Series { id, n, m } => v.check_series(id, n, m),
            Task::Step { id, n, k: None } => v.proof_step(id, n),
            Task::Step { id, n, k: Some(k) } => v.proof_step_at(id, n, k),
            Task::Carlitz { n, a, b, s } => v.carlitz_check(n, a, b, s),
            Task::Classical(p) => classical_check(p),
        }
    }

    fn n(&self) -> Option<u64> {
        match *self {
            Task::Series { n, .. } | Task::Step { n, .. } => Some(n),
            _ => None,
        }
    }
}

/// Steps whose parts are indexed by `k`.
fn indexed_by_k(id: CheckId) -> bool {
    use CheckId::*;
    matches!(id, QbinomNegk | B3 | B5 | C3 | C4 | B2Identity | C2Identity)
}

fn skips_middle(id: CheckId) -> bool {
    matches!(id, CheckId::B3 | CheckId::B5 | CheckId::C4)
}

/// Residue class mod 4 a case-split step needs, if any.
fn case_of(id: CheckId) -> Option<u64> {
    use CheckId::*;
    match id {
        B16 | B18 | C8 | C9 => Some(1),
        B19 | B20 | C10 | C11 => Some(3),
        _ => None,
    }
}

fn step_tasks(id: CheckId, n: u64, params: &Params, out: &mut Vec<Task>) {
    if n < 3 || case_of(id).is_some_and(|r| n % 4 != r) {
        return;
    }
    if let CheckId::QpowLemma(_) = id {
        let ss = params
            .s
            .map_or_else(|| qpow_lemma_exponents(n), |s| vec![s]);
        out.extend(ss.into_iter().map(|s| Task::Step {
            id: CheckId::QpowLemma(s),
            n,
            k: None,
        }));
        return;
    }
    match params.k {
        Some(k) if k >= n || (skips_middle(id) && k == (n - 1) / 2) => {}
        k => out.push(Task::Step { id, n, k }),
    }
}

/// Expands check names over a range. Unknown names and inapplicable
/// parameters are reported before any check runs.
pub fn plan(names: &[String], range: NRange, params: &Params) -> Result<Vec<Task>, String> {
    let resolved: Vec<Registered> = names
        .iter()
        .map(|name| resolve(name).ok_or_else(|| format!("unknown check {name:?}")))
        .collect::<Result<_, _>>()?;
    for (name, r) in names.iter().zip(&resolved) {
        if params.k.is_some() && !matches!(r, Registered::Step(id) if indexed_by_k(*id)) {
            return Err(format!("--k does not apply to {name}"));
        }
    }
    if let Some(p) = params.p {
        ClassicalParams::new(p, params.r.unwrap_or(1), 1).map_err(|e| e.to_string())?;
    }
    if params.base_power == Some(0) {
        return Err("--base-power must be positive".into());
    }
    if params.a.is_some_and(|a| a.is_one()) {
        return Err("a = 1 is not allowed".into());
    }
    let mut tasks = Vec::new();
    for r in resolved {
        match r {
            Registered::Classical(native) => {
                let power = params.power.unwrap_or(native);
                let r = params.r.unwrap_or(1);
                let primes: Vec<u64> = match params.p {
                    Some(p) => vec![p],
                    None => (range.start..=range.end)
                        .filter(|&p| p % 2 == 1 && is_prime(p))
                        .collect(),
                };
                for p in primes {
                    tasks.push(Task::Classical(
                        ClassicalParams::new(p, r, power).map_err(|e| e.to_string())?,
                    ));
                }
            }
            r => {
                for n in range.odd() {
                    match r {
                        Registered::Series(CheckId::WangYu(_)) => {
                            let ds: Vec<i64> =
                                params.d.map_or_else(|| (-5..=5).collect(), |d| vec![d]);
                            for d in ds {
                                if n as i64 > 2 * d.abs() - 1 {
                                    let id = CheckId::WangYu(d);
                                    tasks.push(Task::Series {
                                        id,
                                        n,
                                        m: params.power.unwrap_or(id.native_power()),
                                    });
                                }
                            }
                        }
                        Registered::Series(id) => tasks.push(Task::Series {
                            id,
                            n,
                            m: params.power.unwrap_or(id.native_power()),
                        }),
                        Registered::Carlitz => {
                            let a_grid = params
                                .a
                                .map_or_else(|| CARLITZ_A_GRID.to_vec(), |a| vec![a]);
                            let b_grid = params
                                .b
                                .map_or_else(|| CARLITZ_B_GRID.to_vec(), |b| vec![b]);
                            let s_grid = params.base_power.map_or_else(|| vec![1, 2], |s| vec![s]);
                            for &a in &a_grid {
                                for &b in &b_grid {
                                    for &s in &s_grid {
                                        tasks.push(Task::Carlitz { n, a, b, s });
                                    }
                                }
                            }
                        }
                        Registered::ProofChain(section) => {
                            if n >= 3 {
                                tasks.extend(
                                    chain_steps(n, section).into_iter().map(|id| Task::Step {
                                        id,
                                        n,
                                        k: None,
                                    }),
                                );
                            }
                        }
                        Registered::Step(id) => step_tasks(id, n, params, &mut tasks),
                        Registered::Classical(_) => unreachable!(),
                    }
                }
            }
        }
    }
    if tasks.is_empty() {
        return Err(format!(
            "no (check, n) pairs to run for n in {}..={}",
            range.start, range.end
        ));
    }
    Ok(tasks)
}

/// Every `n` whose cyclotomic polynomial the tasks will need.
pub fn cyclotomic_indices(tasks: &[Task]) -> Vec<u64> {
    let mut ns: Vec<u64> = tasks.iter().filter_map(Task::n).collect();
    ns.sort_unstable();
    ns.dedup();
    ns
}

pub struct Outcome {
    /// Results in task order; with fail-fast, the prefix ending at the first failure.
    pub results: Vec<CheckResult>,
    pub error: Option<String>,
}

/// Runs the tasks on a pool of `threads` workers and returns results in task
/// order, independent of scheduling.
pub fn run_all(
    v: &Verifier,
    tasks: &[Task],
    threads: usize,
    fail_fast: bool,
) -> Result<Outcome, String> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| e.to_string())?;
    let stop = AtomicBool::new(false);
    let mut slots: Vec<Option<Result<CheckResult, CheckError>>> = pool.install(|| {
        tasks
            .par_iter()
            .map(|t| {
                if fail_fast && stop.load(Ordering::Relaxed) {
                    return None;
                }
                let r = t.run(v);
                if !matches!(r, Ok(ref c) if c.holds) {
                    stop.store(true, Ordering::Relaxed);
                }
                Some(r)
            })
            .collect()
    });
    let mut results = Vec::new();
    for (i, slot) in slots.iter_mut().enumerate() {
        // a task skipped after a later failure still precedes the first failure in order
        let r = match slot.take() {
            Some(r) => r,
            None => tasks[i].run(v),
        };
        match r {
            Ok(c) => {
                let failed = !c.holds;
                results.push(c);
                if failed && fail_fast {
                    break;
                }
            }
            Err(e) => {
                return Ok(Outcome {
                    results,
                    error: Some(format!("{}: {e}", describe(&tasks[i]))),
                })
            }
        }
    }
    Ok(Outcome {
        results,
        error: None,
    })
}

fn describe(t: &Task) -> String {
    match t {
        Task::Series { id, n, m } => format!("{id} at n = {n}, power {m}"),
        Task::Step { id, n, .. } => format!("{id} at n = {n}"),
        Task::Carlitz { n, a, b, s } => {
            format!("carlitz at n = {n}, a = {a}, b = {b}, base power {s}")
        }
        Task::Classical(p) => format!("{} at p = {}, r = {}", p.id(), p.p, p.r),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn ranges() {
        assert_eq!("3..=7".parse(), Ok(NRange { start: 3, end: 7 }));
        assert_eq!("3..7".parse(), Ok(NRange { start: 3, end: 6 }));
        assert_eq!("5".parse(), Ok(NRange { start: 5, end: 5 }));
        assert!("0..=3".parse::<NRange>().is_err());
        assert!("7..=3".parse::<NRange>().is_err());
        assert!("x".parse::<NRange>().is_err());
    }

    #[test]
    fn planning_rules() {
        let r = NRange { start: 1, end: 9 };
        let p = Params::default();
        assert_eq!(plan(&names(&["a1"]), r, &p).unwrap().len(), 5);
        assert!(plan(&names(&["a1"]), NRange { start: 4, end: 4 }, &p).is_err());
        assert!(plan(&names(&["nope"]), r, &p).is_err());
        // d ranges over |d| ≤ 5 with n > 2|d| - 1
        let wy = plan(&names(&["wang-yu"]), NRange { start: 5, end: 5 }, &p).unwrap();
        assert_eq!(wy.len(), 5);
        let b16 = plan(&names(&["b16"]), r, &p).unwrap();
        assert_eq!(
            b16.iter().filter_map(Task::n).collect::<Vec<_>>(),
            vec![5, 9]
        );
        let sun = plan(&names(&["sun"]), NRange { start: 1, end: 20 }, &p).unwrap();
        assert_eq!(sun.len(), 7);
        let k = Params {
            k: Some(1),
            ..Params::default()
        };
        assert!(plan(&names(&["a1"]), r, &k).is_err());
        assert_eq!(plan(&names(&["b3"]), r, &k).unwrap().len(), 3);
    }
}
