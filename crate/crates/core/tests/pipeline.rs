use gamow_core::delta_shell::{find_pole, pseudo_norm_1p};
use gamow_core::pseudo_norm::{pseudo_norm, surface_weight, weight_nonrel_closed, Resolution, ShellState};
use gamow_core::stationary_phase::stationary_momenta;
use gamow_core::tau_front::{front_surface_sample, tau_implicit};
use gamow_core::{ComplexEnergyF64, ParticleSystem, ParticleSystemF64, ShellResonanceF64};

#[test]
fn sampled_fronts_have_the_requested_tau() {
    for sys in [
        ParticleSystemF64::nonrelativistic(vec![1.0, 2.0, 0.5]).unwrap(),
        ParticleSystemF64::relativistic(vec![1.0, 2.0, 0.5]).unwrap(),
    ] {
        let e = ComplexEnergyF64::real(if sys.is_relativistic() { 5.0 } else { 1.5 }).unwrap();
        for r in front_surface_sample(&sys, e.e0(), 2.5, 5).unwrap() {
            let tau = tau_implicit(&r, &sys, &e).unwrap();
            assert!((tau.re - 2.5).abs() <= 1e-10 && tau.im.abs() <= 1e-12);
            let (p, _) = stationary_momenta(&r, &sys, &e).unwrap();
            let back = sys.energy(&p).unwrap();
            assert!((back - e.value()).norm() <= 1e-10 * e.e0());
        }
    }
}

#[test]
fn weights_agree_on_a_decaying_front() {
    let sys = ParticleSystemF64::nonrelativistic(vec![1.0, 3.0]).unwrap();
    let e = ComplexEnergyF64::new(2.0, 0.2).unwrap();
    for r in front_surface_sample(&sys, 2.0, 4.0, 6).unwrap() {
        if r.as_slice().iter().any(|&x| x <= 0.0) {
            continue;
        }
        let a = surface_weight(&r, &sys, &e).unwrap();
        let b = weight_nonrel_closed(&r, &sys, &e).unwrap();
        assert!((a - b).norm() <= 1e-10 * b.norm());
    }
}

#[test]
fn shell_norm_through_both_paths() {
    let res: ShellResonanceF64 = find_pole(15.0, 2.0, 0.5, 2).unwrap();
    let e = res.complex_energy().unwrap();
    let sys = ParticleSystem::nonrelativistic(vec![res.m]).unwrap();
    let big_r = 7.0 * res.a;
    let tau_r = big_r * (res.m / (2.0 * e.e0())).sqrt();
    let multi = pseudo_norm(&ShellState(res), &sys, &e, tau_r, Resolution::for_energy(&e, 2.0, 1)).unwrap();
    let single = pseudo_norm_1p(&res, big_r).unwrap();
    assert!((multi - single).norm() <= 1e-8 * single.norm());
}
