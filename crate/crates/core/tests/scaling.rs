use std::time::{Duration, Instant};

use topostress::pipeline::{aggregate_windows, extract_record_seq};
use topostress::signal::{DelaySchedule, WindowSpec};
use topostress::synth::{generate, SynthSpec};

fn best_of_three(duration_s: f64) -> Duration {
    let spec = SynthSpec { n_subjects: 1, duration_s, ..SynthSpec::default() };
    let record = generate(&spec).unwrap().remove(0).baseline;
    let window = WindowSpec::default().with_window(20.0);
    let schedule = DelaySchedule::default();
    (0..3)
        .map(|_| {
            let t = Instant::now();
            let f = extract_record_seq(&record, &window, &schedule).unwrap();
            let rows = aggregate_windows(&f, &window).unwrap();
            std::hint::black_box(rows);
            t.elapsed()
        })
        .min()
        .unwrap()
}

#[test]
fn extraction_time_is_linear_in_duration() {
    best_of_three(20.0);
    let short = best_of_three(100.0);
    let long = best_of_three(200.0);
    let ratio = long.as_secs_f64() / short.as_secs_f64();
    assert!((1.5..=2.5).contains(&ratio), "{short:?} then {long:?}, ratio {ratio:.3}");
}
