//! Index-addressed worker pool. Workers claim indices from a shared
//! counter and write into their own slot, so the merged output order is
//! independent of scheduling.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

pub fn run_indexed<T, F>(n: usize, jobs: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    let jobs = jobs.max(1).min(n.max(1));
    if jobs == 1 {
        return (0..n).map(f).collect();
    }
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<T>>> = Mutex::new((0..n).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let idx = next.fetch_add(1, Ordering::Relaxed);
                if idx >= n {
                    break;
                }
                let value = f(idx);
                slots.lock().expect("pool slots lock")[idx] = Some(value);
            });
        }
    });
    slots
        .into_inner()
        .expect("pool slots lock")
        .into_iter()
        .map(|slot| slot.expect("every index filled"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_order_matches_serial() {
        let serial = run_indexed(100, 1, |i| i * i);
        let parallel = run_indexed(100, 7, |i| i * i);
        assert_eq!(serial, parallel);
    }
}
