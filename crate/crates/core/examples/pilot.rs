use std::sync::Arc;
use std::time::Instant;
use forestwalk::preset::{build_preset_scale, walk_alpha, walk_law, PresetName};
use forestwalk::records::build_envelopes;
use forestwalk::walk::*;
use rayon::prelude::*;

fn main() {
    let t0 = Instant::now();
    let scale = build_preset_scale(PresetName::F2Walk).unwrap();
    println!("tower build: {:?}, levels {}", t0.elapsed(), scale.horizon());
    let law = walk_law();
    let dist = Arc::new(StepDistribution::build(scale.clone(), law.clone(), &|i| walk_alpha(i)).unwrap());
    let envelopes = Arc::new(build_envelopes(&law, scale.horizon() as u64).unwrap());

    // criterion 7/8 pilot: 100 paths x 10^4 (scaled down 10x from 1000)
    let t = Instant::now();
    let results: Vec<(usize, bool, usize, usize, usize)> = (0..100u64).into_par_iter().map(|s| {
        let trace = sample_path(&dist, 10_000, StartPoint::identity(dist.scale()), 7, (1<<32) + s).unwrap();
        let rep = verify_spike_structure(&dist, &trace, &SpikeOptions::default()).unwrap();
        let trunk = verify_trunk(&rep);
        let con = verify_constrained(&trace, &envelopes, &rep, 10).unwrap();
        (rep.exceptions, trunk.k0.is_some(), trunk.chain_exceptions, con.violations, con.pairs)
    }).collect();
    let exc: usize = results.iter().map(|r| r.0).sum();
    let k0: usize = results.iter().filter(|r| r.1).count();
    let chain_exc: usize = results.iter().map(|r| r.2).sum();
    println!("100x10^4 paths in {:?}: exceptions {exc}, k0 {k0}/100, chain_exc {chain_exc}", t.elapsed());

    // criterion 9 pilot: 1000 paths x 10^3
    let t = Instant::now();
    let results: Vec<(usize, usize)> = (0..1000u64).into_par_iter().map(|s| {
        let trace = sample_path(&dist, 1_000, StartPoint::identity(dist.scale()), 7, (5<<32) + s).unwrap();
        let rep = verify_spike_structure(&dist, &trace, &SpikeOptions::default()).unwrap();
        let con = verify_constrained(&trace, &envelopes, &rep, 10).unwrap();
        (con.violations, con.pairs)
    }).collect();
    let viol: usize = results.iter().map(|r| r.0).sum();
    let pairs: usize = results.iter().map(|r| r.1).sum();
    println!("1000x10^3 in {:?}: psi violations {viol} over {pairs} pairs ({} per path)", t.elapsed(), viol as f64 / 1000.0);

    // criterion 10 pilot: rays of depth >= 8 from T=10^5 paths
    let t = Instant::now();
    let chains: Vec<usize> = (0..40u64).into_par_iter().map(|s| {
        let trace = sample_path(&dist, 100_000, StartPoint::identity(dist.scale()), 7, (9<<32) + s).unwrap();
        let rep = verify_spike_structure(&dist, &trace, &SpikeOptions::default()).unwrap();
        match rep.k0 { Some(k0) => rep.epochs.len() - k0, None => 0 }
    }).collect();
    let deep = chains.iter().filter(|&&c| c >= 9).count();
    println!("40x10^5 in {:?}: chains>=9 vertices {deep}/40 (lens {:?})", t.elapsed(), &chains[..10.min(chains.len())]);
}
