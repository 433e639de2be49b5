use rand::Rng;
use rand_distr::StandardNormal;
use std::f64::consts::TAU;

use super::{SubjectPair, SynthSignal, SynthSpec};
use crate::error::{Error, Result};
use crate::signal::{Condition, SampleRate, SignalRecord};

/// `sin(2 pi (rpm/60) t + phase) + noise * eps(t)` with one phase per subject.
pub fn gen_resp(spec: &SynthSpec, index: usize) -> Result<SubjectPair> {
    let SynthSignal::Resp { baseline_rpm, stress_rpm } = spec.signal else {
        return Err(Error::invalid("gen_resp needs a resp spec"));
    };
    let mut rng = spec.subject_rng(index);
    let phase: f64 = rng.random::<f64>() * TAU;
    let fs = spec.fs as f64;
    let n = spec.samples_per_condition();
    let mut segment = |rpm: f64| -> Vec<f64> {
        let w = TAU * rpm / 60.0;
        (0..n)
            .map(|i| {
                let eps: f64 = rng.sample(StandardNormal);
                (w * i as f64 / fs + phase).sin() + spec.noise * eps
            })
            .collect()
    };
    let baseline = segment(baseline_rpm);
    let stress = segment(stress_rpm);
    let id = SynthSpec::subject_id(index);
    let rate = SampleRate::hz_int(spec.fs);
    Ok(SubjectPair {
        baseline: SignalRecord::new(&id, Condition::baseline(), "resp", rate, baseline)?,
        stress: SignalRecord::new(&id, Condition::stress(), "resp", rate, stress)?,
    })
}
