//! Cat-state structure of the j = 50, kappa = pi j orbit from (2.25, 2.0):
//! one lump, split in two after the first kick, four after the second,
//! recombined (reflected) after the fourth and back home after the eighth.

use std::f64::consts::PI;

use kicktop::{
    apply_kicks, build_floquet, coherent_state, husimi, CoherentParams, FloquetSpec, SpinParams,
};

#[test]
fn maxima_counts_along_the_orbit() {
    let s = SpinParams::new(50.0).unwrap();
    let u = build_floquet(&FloquetSpec::new(s, PI * 50.0));
    let psi = coherent_state(s, CoherentParams::new(2.25, 2.0));
    let traj = apply_kicks(&u, &psi, 8).unwrap();
    let counts: Vec<usize> = traj
        .iter()
        .map(|st| husimi(st, 140, 280).unwrap().local_maxima(0.5).len())
        .collect();
    assert_eq!(counts, [1, 2, 4, 2, 1, 2, 4, 2, 1]);
    assert!(1.0 - psi.fidelity(&traj[8]) < 1e-10);
    // kick 4 is a single lump but not the initial one
    assert!(psi.fidelity(&traj[4]) < 0.5);
}

#[test]
fn split_lumps_carry_equal_weight() {
    let s = SpinParams::new(50.0).unwrap();
    let u = build_floquet(&FloquetSpec::new(s, PI * 50.0));
    let psi = coherent_state(s, CoherentParams::new(2.25, 2.0));
    let st = &apply_kicks(&u, &psi, 2).unwrap()[2];
    let q = husimi(st, 140, 280).unwrap();
    let peaks: Vec<f64> = q
        .local_maxima(0.5)
        .iter()
        .map(|&(i, k)| q.get(i, k))
        .collect();
    let (lo, hi) = peaks
        .iter()
        .fold((f64::MAX, 0.0f64), |(a, b), &v| (a.min(v), b.max(v)));
    assert!(lo / hi > 0.8, "peak heights {peaks:?}");
}
