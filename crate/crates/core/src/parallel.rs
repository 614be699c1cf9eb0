use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

/// Runs `work` over `[lo, hi]` split into contiguous chunks and concatenates
/// the per-chunk outputs in range order. The worker count only changes wall
/// time; `jobs <= 1` runs inline without spawning.
pub(crate) fn map_range<T, F>(lo: u64, hi: u64, jobs: usize, work: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, u64) -> Vec<T> + Sync,
{
    if lo > hi {
        return Vec::new();
    }
    if jobs <= 1 {
        return work(lo, hi);
    }
    let span = hi - lo + 1;
    let chunks = (jobs as u64 * 8).min(span);
    let step = span.div_ceil(chunks);
    let bounds: Vec<(u64, u64)> = (0..chunks)
        .map(|i| lo + i * step)
        .take_while(|&start| start <= hi)
        .map(|start| (start, (start + step - 1).min(hi)))
        .collect();

    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<Vec<T>>>> = Mutex::new((0..bounds.len()).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..jobs.min(bounds.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(a, b)) = bounds.get(i) else { break };
                let out = work(a, b);
                slots.lock().unwrap()[i] = Some(out);
            });
        }
    });
    slots
        .into_inner()
        .unwrap()
        .into_iter()
        .flat_map(|slot| slot.unwrap_or_default())
        .collect()
}
