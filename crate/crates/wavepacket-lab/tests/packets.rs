use proptest::prelude::*;
use wavepacket_lab::propagator::{hankel_mode, make_random_localized};
use wavepacket_lab::wavepackets::{psi, reconstruct_mode, PacketCoefficients};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn packet_sum_reconstructs_each_mode(seed in 0u64..1000, t in 0.0f64..20.0, r in 0.05f64..24.0) {
        let data = make_random_localized(3, 2, seed).unwrap();
        let pc = PacketCoefficients::from_modes(&data, 512);
        let (idx, p) = data.iter().next().unwrap();
        let direct = hankel_mode(*idx, p, t, r).unwrap();
        let packed = reconstruct_mode(&pc, *idx, t, r).unwrap();
        prop_assert!((direct - packed).norm() <= 1e-6 * direct.norm().max(1e-3));
    }

    #[test]
    fn packet_coefficients_satisfy_energy_equivalence(seed in 0u64..1000) {
        let data = make_random_localized(3, 3, seed).unwrap();
        let pc = PacketCoefficients::from_modes(&data, 512);
        let (a, b) = pc.energy_equivalence();
        let f2 = data.l2_norm_sq();
        prop_assert!(a * pc.l2_sq() <= f2 * (1.0 + 1e-9) && f2 <= b * pc.l2_sq() * (1.0 + 1e-9));
    }

    #[test]
    fn psi_depends_on_m_through_its_modulus(l in 0usize..8, m in 0.0f64..20.0, r in 0.0f64..30.0) {
        let a = psi(l, m, r, 3).unwrap().norm();
        let b = psi(l, -m, r, 3).unwrap().norm();
        prop_assert!((a - b).abs() <= 1e-9 * a.max(1e-6));
    }
}
