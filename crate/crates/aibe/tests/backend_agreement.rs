//! The two backends must be interchangeable: identical operation semantics,
//! identical protocol-level verdicts for matched random tapes driven
//! through the same scheme code.

use aibe::basic::{self, HashModeRequest, Identity};
use aibe::cca::{self, CipherSuite};
use aibe::gentry;
use aibe::groups::rand::{FixedTape, ScalarSource, SeededSource};
use aibe::groups::{BilinearContext, MOCK_P61};
use aibe::ibbe::{self, ReceiverSet};

/// A tape of raw integers replayable against either backend.
fn matched_tapes(seed: u64, len: usize) -> (FixedTape, FixedTape) {
    let mut src = SeededSource::new(seed);
    // Draw well below the mock modulus so the same integers are valid
    // scalars on both backends.
    let values: Vec<u64> = (0..len)
        .map(|_| 1 + src.next_u64() % (MOCK_P61 - 1))
        .collect();
    (FixedTape::new(&values), FixedTape::new(&values))
}

fn contexts() -> (BilinearContext, BilinearContext) {
    (
        BilinearContext::mock(MOCK_P61).unwrap(),
        BilinearContext::curve(128).unwrap(),
    )
}

#[test]
fn bilinearity_and_group_laws_agree() {
    let (mock, curve) = contexts();
    for ctx in [mock, curve] {
        let g = ctx.generator();
        let mut src = SeededSource::new(1);
        for _ in 0..40 {
            let a = src.next_nonzero(&ctx);
            let b = src.next_nonzero(&ctx);
            let x = src.next_nonzero(&ctx);
            // e(g^a, g^b)^x = e(g^{ax}, g^b) = e(g^a, g^{bx}) = e(g,g)^{abx}
            let lhs = ctx.pair(&g.exp(&a), &g.exp(&b)).exp(&x);
            assert_eq!(lhs, ctx.pair(&g.exp(&a.mul(&x)), &g.exp(&b)));
            assert_eq!(lhs, ctx.pair(&g.exp(&a), &g.exp(&b.mul(&x))));
            assert_eq!(lhs, ctx.gt_generator().exp(&a.mul(&b).mul(&x)));
            // exp laws
            assert_eq!(g.exp(&a).exp(&b), g.exp(&a.mul(&b)));
            assert_eq!(g.exp(&ctx.scalar_zero()), ctx.identity_source());
            assert_eq!(g.exp(&ctx.scalar_one()), g);
            // identity behavior and non-degeneracy
            assert_eq!(
                ctx.pair(&ctx.identity_source(), &g.exp(&b)),
                ctx.identity_target()
            );
            assert!(!ctx.pair(&g, &g).is_identity());
        }
    }
}

#[test]
fn pair_product_matches_individual_pairings() {
    let (mock, curve) = contexts();
    for ctx in [mock, curve] {
        let mut src = SeededSource::new(2);
        let a = ctx.random_source(&mut src);
        let b = ctx.random_source(&mut src);
        let c = ctx.random_source(&mut src);
        let d = ctx.random_source(&mut src);
        let product = ctx.pair_product(&[(a, b), (c, d)]);
        assert_eq!(product, ctx.pair(&a, &b).mul(&ctx.pair(&c, &d)));
    }
}

#[test]
fn core_protocol_predicates_agree_on_matched_tapes() {
    let (mock, curve) = contexts();
    // user tape: t0, theta, k1, k2, r''; pkg tape: challenge, r', t1;
    // encrypt tape: s. Setup tape: x, h, Y, Z.
    for (mock_seed, curve_seed) in [(10u64, 10u64), (11, 11), (12, 12)] {
        let (mut setup_m, mut setup_c) = matched_tapes(mock_seed, 4);
        let (mpk_m, msk_m) = basic::setup(&mock, HashModeRequest::BonehBoyen, &mut setup_m);
        let (mpk_c, msk_c) = basic::setup(&curve, HashModeRequest::BonehBoyen, &mut setup_c);

        let id_m = Identity::Scalar(mock.scalar_from_u64(12345));
        let id_c = Identity::Scalar(curve.scalar_from_u64(12345));

        let (mut user_m, mut user_c) = matched_tapes(curve_seed + 100, 5);
        let (mut pkg_m, mut pkg_c) = matched_tapes(curve_seed + 200, 3);
        let key_m = basic::run_keygen(&mpk_m, &msk_m, &id_m, &mut user_m, &mut pkg_m).unwrap();
        let key_c = basic::run_keygen(&mpk_c, &msk_c, &id_c, &mut user_c, &mut pkg_c).unwrap();

        // Same verdicts on both backends.
        assert!(basic::key_sanity_check(&mpk_m, &id_m, &key_m));
        assert!(basic::key_sanity_check(&mpk_c, &id_c, &key_c));
        assert!(key_m.d3.mock_value().is_some());

        // Same perturbation verdicts.
        let mut bad_m = key_m.clone();
        bad_m.d3 = bad_m.d3.add(&mock.scalar_one());
        let mut bad_c = key_c.clone();
        bad_c.d3 = bad_c.d3.add(&curve.scalar_one());
        assert!(!basic::key_sanity_check(&mpk_m, &id_m, &bad_m));
        assert!(!basic::key_sanity_check(&mpk_c, &id_c, &bad_c));

        // Roundtrip verdicts match.
        let m_m = mock.gt_generator().exp(&mock.scalar_from_u64(777));
        let m_c = curve.gt_generator().exp(&curve.scalar_from_u64(777));
        let (mut enc_m, mut enc_c) = matched_tapes(curve_seed + 300, 1);
        let ct_m = basic::encrypt(&mpk_m, &id_m, &m_m, &mut enc_m).unwrap();
        let ct_c = basic::encrypt(&mpk_c, &id_c, &m_c, &mut enc_c).unwrap();
        assert_eq!(basic::decrypt(&mpk_m, &key_m, &ct_m), m_m);
        assert_eq!(basic::decrypt(&mpk_c, &key_c, &ct_c), m_c);
        assert!(basic::ciphertext_publicly_consistent(&mpk_m, &id_m, &ct_m));
        assert!(basic::ciphertext_publicly_consistent(&mpk_c, &id_c, &ct_c));
    }
}

#[test]
fn gentry_and_ibbe_predicates_agree_on_matched_tapes() {
    let (mock, curve) = contexts();

    let (mut setup_m, mut setup_c) = matched_tapes(20, 2);
    let (gm, gs) = gentry::setup(&mock, &mut setup_m);
    let (cm, cs) = gentry::setup(&curve, &mut setup_c);
    let (mut user_m, mut user_c) = matched_tapes(21, 4);
    let (mut pkg_m, mut pkg_c) = matched_tapes(22, 2);
    let id_m = mock.scalar_from_u64(424242);
    let id_c = curve.scalar_from_u64(424242);
    let key_m = gentry::run_keygen(&gm, &gs, &id_m, &mut user_m, &mut pkg_m).unwrap();
    let key_c = gentry::run_keygen(&cm, &cs, &id_c, &mut user_c, &mut pkg_c).unwrap();
    assert!(gentry::key_sanity_check(&gm, &key_m));
    assert!(gentry::key_sanity_check(&cm, &key_c));
    let (mut enc_m, mut enc_c) = matched_tapes(23, 1);
    let m_m = mock.gt_generator().exp(&mock.scalar_from_u64(31));
    let m_c = curve.gt_generator().exp(&curve.scalar_from_u64(31));
    assert_eq!(
        gentry::decrypt(&gm, &key_m, &gentry::encrypt(&gm, &id_m, &m_m, &mut enc_m)),
        m_m
    );
    assert_eq!(
        gentry::decrypt(&cm, &key_c, &gentry::encrypt(&cm, &id_c, &m_c, &mut enc_c)),
        m_c
    );

    // Broadcast setup draws z, a_0..a_4, alpha, g2, g3: nine values at N = 4.
    let (mut setup_m9, mut setup_c9) = matched_tapes(26, 9);
    let (im, is) = ibbe::aibbe_setup(&mock, 4, &mut setup_m9);
    let (icm, ics) = ibbe::aibbe_setup(&curve, 4, &mut setup_c9);
    let set_m = ReceiverSet::new(vec![mock.scalar_from_u64(5), mock.scalar_from_u64(9)]).unwrap();
    let set_c = ReceiverSet::new(vec![curve.scalar_from_u64(5), curve.scalar_from_u64(9)]).unwrap();
    let (mut user_m, mut user_c) = matched_tapes(27, 5);
    let (mut pkg_m, mut pkg_c) = matched_tapes(28, 3);
    let id_m = mock.scalar_from_u64(5);
    let id_c = curve.scalar_from_u64(5);
    let key_m = ibbe::run_keygen(&im, &is, &id_m, &mut user_m, &mut pkg_m).unwrap();
    let key_c = ibbe::run_keygen(&icm, &ics, &id_c, &mut user_c, &mut pkg_c).unwrap();
    assert!(ibbe::key_sanity_check(&im, &key_m));
    assert!(ibbe::key_sanity_check(&icm, &key_c));
    let (mut enc_m, mut enc_c) = matched_tapes(29, 1);
    let m_m = mock.gt_generator().exp(&mock.scalar_from_u64(88));
    let m_c = curve.gt_generator().exp(&curve.scalar_from_u64(88));
    let ct_m = ibbe::aibbe_encrypt(&im, &set_m, &m_m, &mut enc_m).unwrap();
    let ct_c = ibbe::aibbe_encrypt(&icm, &set_c, &m_c, &mut enc_c).unwrap();
    assert_eq!(
        ibbe::aibbe_decrypt(&im, &key_m, &set_m, &ct_m).unwrap(),
        m_m
    );
    assert_eq!(
        ibbe::aibbe_decrypt(&icm, &key_c, &set_c, &ct_c).unwrap(),
        m_c
    );
}

#[test]
fn cca_rejection_verdicts_agree() {
    let (mock, curve) = contexts();
    for ctx in [mock, curve] {
        let mut src = SeededSource::new(30);
        let (mpk, msk) = cca::setup(&ctx, CipherSuite::default(), &mut src);
        let id = src.next_nonzero(&ctx);
        let mut pkg_src = SeededSource::new(31);
        let key = cca::run_keygen(&mpk, &msk, &id, &mut src, &mut pkg_src).unwrap();
        let ct = cca::encrypt(&mpk, &id, b"backend agreement", &mut src);
        assert_eq!(cca::decrypt(&mpk, &key, &ct).unwrap(), b"backend agreement");

        let mut type1 = ct.clone();
        type1.c2 = type1.c2.mul(&mpk.identity_hash(&id));
        assert!(matches!(
            cca::decrypt(&mpk, &key, &type1),
            Err(aibe::Error::TypeIReject)
        ));

        let mut type2 = ct.clone();
        type2.c3 = type2.c3.mul(&ctx.random_target(&mut src));
        assert!(matches!(
            cca::decrypt(&mpk, &key, &type2),
            Err(aibe::Error::AeadReject)
        ));
    }
}
