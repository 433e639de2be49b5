use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use topostress::pipeline::{extract_record, extract_record_seq};
use topostress::signal::{DelaySchedule, WindowSpec};
use topostress::synth::{generate, SynthSpec};

fn bench_extract(c: &mut Criterion) {
    let spec = SynthSpec { n_subjects: 1, duration_s: 20.0, ..SynthSpec::default() };
    let record = generate(&spec).unwrap().remove(0).baseline;
    let window = WindowSpec::default().with_window(20.0);
    let schedule = DelaySchedule::default();

    let mut group = c.benchmark_group("extract_20s_resp");
    group.sample_size(10);
    group.bench_function("sequential", |b| {
        b.iter_batched(|| &record, |r| extract_record_seq(r, &window, &schedule).unwrap(), BatchSize::SmallInput)
    });
    group.bench_function("parallel", |b| {
        b.iter_batched(|| &record, |r| extract_record(r, &window, &schedule).unwrap(), BatchSize::SmallInput)
    });
    group.finish();
}

criterion_group!(benches, bench_extract);
criterion_main!(benches);
