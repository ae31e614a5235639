//! Serialization invariants: bit-exact roundtrips for every artifact on
//! both backends, deterministic output, and explicit errors on malformed
//! input.

use aibe::basic::{self, HashModeRequest, Identity};
use aibe::cca::{self, CipherSuite};
use aibe::codec;
use aibe::gentry;
use aibe::groups::rand::{ScalarSource, SeededSource};
use aibe::groups::{BilinearContext, Scalar, SourceElement, TargetElement, MOCK_P61};
use aibe::ibbe::{self, ReceiverSet};
use aibe::{CodecError, Error};
use proptest::prelude::*;

fn contexts() -> Vec<BilinearContext> {
    vec![
        BilinearContext::mock(101).unwrap(),
        BilinearContext::mock(MOCK_P61).unwrap(),
        BilinearContext::curve(128).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// decode(encode(e)) = e for every element type, on every backend, and
    /// the encoding is deterministic.
    #[test]
    fn element_roundtrip(exponent in 1u64..=100_000u64) {
        for ctx in contexts() {
            let s = ctx.scalar_from_u64(exponent);
            prop_assert_eq!(Scalar::from_bytes(&ctx, &s.to_bytes()).unwrap(), s);

            let e = ctx.generator().exp(&s);
            let bytes = e.to_bytes();
            prop_assert_eq!(&bytes, &e.to_bytes());
            prop_assert_eq!(SourceElement::from_bytes(&ctx, &bytes).unwrap(), e);

            let t = ctx.gt_generator().exp(&s);
            prop_assert_eq!(TargetElement::from_bytes(&ctx, &t.to_bytes()).unwrap(), t);
        }
    }

}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    /// Pairing bilinearity over the exponent ring, checked on the mock
    /// backend for a thousand random tuples.
    #[test]
    fn mock_bilinearity(a in 1u64..MOCK_P61, b in 1u64..MOCK_P61, x in 1u64..MOCK_P61, y in 1u64..MOCK_P61) {
        let ctx = BilinearContext::mock(MOCK_P61).unwrap();
        let g = ctx.generator();
        let (a, b, x, y) = (
            ctx.scalar_from_u64(a),
            ctx.scalar_from_u64(b),
            ctx.scalar_from_u64(x),
            ctx.scalar_from_u64(y),
        );
        let lhs = ctx.pair(&g.exp(&a.mul(&x)), &g.exp(&b.mul(&y)));
        let rhs = ctx.pair(&g, &g).exp(&a.mul(&b).mul(&x).mul(&y));
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn artifact_roundtrips_all_schemes_and_backends() {
    for ctx in contexts() {
        let mut src = SeededSource::new(7);

        // Core.
        let (mpk, msk) = basic::setup(&ctx, HashModeRequest::BonehBoyen, &mut src);
        let id = Identity::Scalar(src.next_nonzero(&ctx));
        let mut pkg_src = SeededSource::new(8);
        let key = basic::run_keygen(&mpk, &msk, &id, &mut src, &mut pkg_src).unwrap();
        let m = ctx.random_target(&mut src);
        let ct = basic::encrypt(&mpk, &id, &m, &mut src).unwrap();

        let mpk_bytes = codec::encode_core_mpk(&mpk);
        assert_eq!(mpk_bytes, codec::encode_core_mpk(&mpk), "deterministic");
        let mpk2 = codec::decode_core_mpk(&mpk_bytes).unwrap();
        assert_eq!(mpk2.x, mpk.x);
        assert_eq!(mpk2.e_g_h, mpk.e_g_h); // caches recomputed, still equal

        let (_, msk2) = codec::decode_core_msk(&codec::encode_core_msk(&ctx, &msk)).unwrap();
        assert_eq!(msk2.x, msk.x);

        let (_, key2) =
            codec::decode_core_user_key(&codec::encode_core_user_key(&ctx, &key)).unwrap();
        assert_eq!(key2, key);

        let (_, ct2) =
            codec::decode_core_ciphertext(&codec::encode_core_ciphertext(&mpk, &ct)).unwrap();
        assert_eq!(ct2, ct);

        // Waters-mode master key.
        let (wmpk, _) = basic::setup(&ctx, HashModeRequest::Waters { bits: 6 }, &mut src);
        let wmpk2 = codec::decode_core_mpk(&codec::encode_core_mpk(&wmpk)).unwrap();
        match (&wmpk.hash_mode, &wmpk2.hash_mode) {
            (
                basic::IdentityHashMode::Waters { u: a, .. },
                basic::IdentityHashMode::Waters { u: b, .. },
            ) => assert_eq!(a, b),
            _ => panic!("hash mode lost in roundtrip"),
        }

        // CCA.
        let (cmpk, cmsk) = cca::setup(&ctx, CipherSuite::default(), &mut src);
        let cid = src.next_nonzero(&ctx);
        let mut pkg_src = SeededSource::new(9);
        let ckey = cca::run_keygen(&cmpk, &cmsk, &cid, &mut src, &mut pkg_src).unwrap();
        let cct = cca::encrypt(&cmpk, &cid, b"artifact roundtrip", &mut src);
        let cmpk2 = codec::decode_cca_mpk(&codec::encode_cca_mpk(&cmpk)).unwrap();
        assert_eq!(cmpk2.y_a, cmpk.y_a);
        assert_eq!(cmpk2.suite, cmpk.suite);
        let (_, ckey2) =
            codec::decode_cca_user_key(&codec::encode_cca_user_key(&ctx, &ckey)).unwrap();
        assert_eq!(ckey2, ckey);
        let (_, cct2) =
            codec::decode_cca_ciphertext(&codec::encode_cca_ciphertext(&cmpk, &cct)).unwrap();
        assert_eq!(cct2, cct);
        assert_eq!(
            cca::decrypt(&cmpk2, &ckey2, &cct2).unwrap(),
            b"artifact roundtrip"
        );

        // Gentry.
        let (gmpk, gmsk) = gentry::setup(&ctx, &mut src);
        let gid = src.next_nonzero(&ctx);
        let gkey = gentry::keygen_direct(&gmsk, &gmpk, &gid, &src.next_nonzero(&ctx)).unwrap();
        let gct = gentry::encrypt(&gmpk, &gid, &ctx.random_target(&mut src), &mut src);
        let gmpk2 = codec::decode_gentry_mpk(&codec::encode_gentry_mpk(&gmpk)).unwrap();
        assert_eq!(gmpk2.g1, gmpk.g1);
        let (_, gkey2) =
            codec::decode_gentry_user_key(&codec::encode_gentry_user_key(&ctx, &gkey)).unwrap();
        assert_eq!(gkey2, gkey);
        let (_, gct2) =
            codec::decode_gentry_ciphertext(&codec::encode_gentry_ciphertext(&gmpk, &gct)).unwrap();
        assert_eq!(gct2, gct);

        // Broadcast (accountable + plain).
        let (impk, imsk) = ibbe::aibbe_setup(&ctx, 4, &mut src);
        let iid = src.next_nonzero(&ctx);
        let ikey = ibbe::keygen_direct(&imsk, &impk, &iid, &src.next_nonzero(&ctx), &mut src);
        let set = ReceiverSet::new(vec![iid, src.next_nonzero(&ctx)]).unwrap();
        let ict = ibbe::aibbe_encrypt(&impk, &set, &ctx.random_target(&mut src), &mut src).unwrap();
        let impk2 = codec::decode_ibbe_mpk(&codec::encode_ibbe_mpk(&impk)).unwrap();
        assert_eq!(impk2.h_vec, impk.h_vec);
        let (_, imsk2) = codec::decode_ibbe_msk(&codec::encode_ibbe_msk(&ctx, &imsk)).unwrap();
        assert_eq!(imsk2.alpha, imsk.alpha);
        assert_eq!(imsk2.a_vec, imsk.a_vec);
        let (_, ikey2) =
            codec::decode_ibbe_user_key(&codec::encode_ibbe_user_key(&ctx, &ikey)).unwrap();
        assert_eq!(ikey2, ikey);
        for include_set in [false, true] {
            let bytes = codec::encode_ibbe_ciphertext(&impk, &ict, &set, include_set);
            let file = codec::decode_ibbe_ciphertext(&bytes).unwrap();
            assert_eq!(file.ciphertext, ict);
            assert_eq!(file.set_digest, codec::receiver_set_digest(&set));
            assert_eq!(file.set.is_some(), include_set);
        }
        let (bmpk, _) = ibbe::bh_setup(&ctx, 4, &mut src);
        let bkey = ibbe::bh_keygen(&imsk, &bmpk, &iid, &mut src);
        let bmpk2 = codec::decode_bh_mpk(&codec::encode_bh_mpk(&bmpk)).unwrap();
        assert_eq!(bmpk2.z, bmpk.z);
        let (_, bkey2) =
            codec::decode_bh_user_key(&codec::encode_bh_user_key(&ctx, &bkey)).unwrap();
        assert_eq!(bkey2, bkey);
    }
}

#[test]
fn ceremony_message_roundtrips() {
    let ctx = BilinearContext::mock(MOCK_P61).unwrap();
    let mut src = SeededSource::new(17);
    let (mpk, msk) = basic::setup(&ctx, HashModeRequest::BonehBoyen, &mut src);
    let id = Identity::Scalar(src.next_nonzero(&ctx));
    let (state, request) = basic::keygen_user_round1_ni(&mpk, &mut src);
    let bytes = codec::encode_request(&ctx, codec::SchemeId::Core, &request);
    let (_, request2) = codec::decode_request(codec::SchemeId::Core, &bytes).unwrap();
    assert_eq!(request2.commitment, request.commitment);
    assert_eq!(request2.transcript.challenge, request.transcript.challenge);

    let mut pkg_src = SeededSource::new(18);
    let blinded = basic::keygen_pkg_respond_ni(&msk, &mpk, &id, &request2, &mut pkg_src).unwrap();
    let (_, blinded2) =
        codec::decode_core_blinded(&codec::encode_core_blinded(&ctx, &blinded)).unwrap();
    assert_eq!(blinded2.d1, blinded.d1);
    assert_eq!(blinded2.d3, blinded.d3);

    let key = basic::keygen_user_finalize(&mpk, &id, state, &blinded2, &mut src).unwrap();
    assert!(basic::key_sanity_check(&mpk, &id, &key));

    // State files reconstruct a finalizable session: persist after round 1,
    // resume, and the finalized key is byte-identical to the in-memory path
    // under the same randomness.
    let mut user_src_a = SeededSource::new(500);
    let mut user_src_b = SeededSource::new(500);
    let (state_a, request_a) = basic::keygen_user_round1_ni(&mpk, &mut user_src_a);
    let (state_b, _) = basic::keygen_user_round1_ni(&mpk, &mut user_src_b);
    let state_bytes = codec::encode_ceremony_state(
        &ctx,
        codec::SchemeId::Core,
        state_a.witness(),
        state_a.commitment(),
    );
    let (_, witness, commitment) =
        codec::decode_ceremony_state(codec::SchemeId::Core, &state_bytes).unwrap();
    let resumed = basic::KeygenUserState::resume(witness, commitment);
    let mut pkg_src = SeededSource::new(501);
    let blinded = basic::keygen_pkg_respond_ni(&msk, &mpk, &id, &request_a, &mut pkg_src).unwrap();
    let mut fin_a = SeededSource::new(502);
    let mut fin_b = SeededSource::new(502);
    let key_resumed =
        basic::keygen_user_finalize(&mpk, &id, resumed, &blinded, &mut fin_a).unwrap();
    let key_direct = basic::keygen_user_finalize(&mpk, &id, state_b, &blinded, &mut fin_b).unwrap();
    assert_eq!(
        codec::encode_core_user_key(&ctx, &key_resumed),
        codec::encode_core_user_key(&ctx, &key_direct)
    );
}

#[test]
fn malformed_inputs_are_explicit_errors() {
    let ctx = BilinearContext::mock(101).unwrap();
    let mut src = SeededSource::new(19);
    let (mpk, _) = basic::setup(&ctx, HashModeRequest::BonehBoyen, &mut src);
    let bytes = codec::encode_core_mpk(&mpk);

    // Flipped magic.
    let mut bad = bytes.clone();
    bad[0] ^= 0xff;
    assert_eq!(
        codec::decode_core_mpk(&bad).unwrap_err(),
        Error::Codec(CodecError::BadMagic)
    );

    // Unknown version.
    let mut bad = bytes.clone();
    bad[5] = 0x7f;
    assert_eq!(
        codec::decode_core_mpk(&bad).unwrap_err(),
        Error::Codec(CodecError::UnknownVersion(0x7f))
    );

    // Truncation.
    assert_eq!(
        codec::decode_core_mpk(&bytes[..bytes.len() - 1]).unwrap_err(),
        Error::Codec(CodecError::Truncated)
    );

    // Trailing bytes.
    let mut bad = bytes.clone();
    bad.push(0);
    assert_eq!(
        codec::decode_core_mpk(&bad).unwrap_err(),
        Error::Codec(CodecError::TrailingBytes)
    );

    // Wrong kind for the decoder entry point.
    assert!(matches!(
        codec::decode_core_user_key(&bytes).unwrap_err(),
        Error::Codec(CodecError::KindMismatch { .. })
    ));

    // Wrong scheme.
    assert!(matches!(
        codec::decode_gentry_mpk(&bytes).unwrap_err(),
        Error::Codec(CodecError::SchemeMismatch { .. })
    ));

    // Non-canonical element payload (mock exponent >= p).
    let mut bad = bytes.clone();
    let len = bad.len();
    bad[len - 8..].copy_from_slice(&1000u64.to_be_bytes());
    assert_eq!(
        codec::decode_core_mpk(&bad).unwrap_err(),
        Error::Codec(CodecError::NonCanonicalElement)
    );

    // Mixing backends is refused when artifacts are combined.
    let curve = BilinearContext::curve(128).unwrap();
    assert_eq!(
        codec::ensure_same_backend(&ctx, &curve).unwrap_err(),
        Error::Codec(CodecError::BackendMismatch)
    );
    assert_eq!(
        codec::ensure_same_backend(&ctx, &BilinearContext::mock(MOCK_P61).unwrap()).unwrap_err(),
        Error::Codec(CodecError::BackendMismatch)
    );

    // Armor errors.
    assert_eq!(
        codec::dearmor("not-base64!!!").unwrap_err(),
        Error::Codec(CodecError::BadArmor)
    );
    assert_eq!(codec::dearmor(&codec::armor(&bytes)).unwrap(), bytes);
}

#[test]
fn curve_source_elements_reject_desynchronized_components() {
    // A source element whose G1 and G2 components carry different discrete
    // logarithms is not a valid encoding of a symmetric-group element.
    let ctx = BilinearContext::curve(128).unwrap();
    let mut src = SeededSource::new(20);
    let a = ctx.random_source(&mut src);
    let b = ctx.random_source(&mut src);
    let a_bytes = a.to_bytes();
    let b_bytes = b.to_bytes();
    // Splice: G1 of a, G2 of b.
    let mut forged = Vec::new();
    forged.extend_from_slice(&a_bytes[..1 + 48]);
    forged.extend_from_slice(&b_bytes[1 + 48..]);
    assert_eq!(
        SourceElement::from_bytes(&ctx, &forged).unwrap_err(),
        Error::Codec(CodecError::NonCanonicalElement)
    );
}
