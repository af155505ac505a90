//! Parallel range sweeps with output in ascending `q`.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;
use std::thread;

use crate::arith::primes_3_mod_4;
use crate::error::Result;
use crate::verify::{verify_theorem, VerificationRecord, VerifyOptions};

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub q_min: u64,
    pub q_max: u64,
    pub jobs: usize,
    pub verify: VerifyOptions,
}

/// Verifies every prime `q ≡ 3 (mod 4)` in `[q_min, q_max]` on a pool of `jobs`
/// workers. `emit` sees each record as soon as all smaller `q` are done, so output order
/// never depends on scheduling.
pub fn sweep<F>(cfg: &SweepConfig, mut emit: F) -> Result<Vec<VerificationRecord>>
where
    F: FnMut(&VerificationRecord),
{
    let qs = primes_3_mod_4(cfg.q_min, cfg.q_max);
    let next = AtomicUsize::new(0);
    let (tx, rx) = mpsc::channel::<(usize, Result<VerificationRecord>)>();
    let mut out = Vec::with_capacity(qs.len());
    thread::scope(|scope| -> Result<()> {
        for _ in 0..cfg.jobs.max(1).min(qs.len().max(1)) {
            let tx = tx.clone();
            let (qs, next) = (&qs, &next);
            scope.spawn(move || loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= qs.len() {
                    break;
                }
                if tx.send((i, verify_theorem(qs[i], &cfg.verify))).is_err() {
                    break;
                }
            });
        }
        drop(tx);
        let mut pending = BTreeMap::new();
        let mut first_error = None;
        for (i, r) in rx {
            pending.insert(i, r);
            while let Some(r) = pending.remove(&out.len()) {
                match r {
                    Ok(rec) => {
                        emit(&rec);
                        out.push(rec);
                    }
                    Err(e) => {
                        first_error.get_or_insert(e);
                        // stop handing out work; running tasks finish on their own
                        next.store(usize::MAX / 2, Ordering::SeqCst);
                        break;
                    }
                }
            }
            if first_error.is_some() {
                break;
            }
        }
        first_error.map_or(Ok(()), Err)
    })?;
    Ok(out)
}
