mod common;

use common::*;
use lbcn_core::math::{mat_vec_mul, norm_l2, Modulus, Rng, ZVector, ZqMatrix, ZqVector};
use lbcn_core::pke::{pke_decrypt, pke_encrypt};
use lbcn_core::proof::relations::{dec_witness, key_witness, share_witness};
use lbcn_core::proof::*;
use lbcn_core::pvss::pvss_setup;
use lbcn_core::shamir::{parity_matrix, sss_share};
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn statements(
    seed: u64,
) -> (lbcn_core::pvss::PvssPublicParams, Vec<(ProofCrs, LinearStatement, ZVector)>) {
    let sp = toy(4, 1);
    let pp = pvss_setup(&sp, &[seed as u8; 32]).unwrap();
    let mut rng = Rng::from_u64(seed);
    let kps: Vec<_> = (0..4)
        .map(|_| lbcn_core::pke::pke_keygen(&pp.a_mat, &sp, &mut rng).unwrap())
        .collect();
    let pks: Vec<ZqVector> = kps.iter().map(|k| k.pk_b.clone()).collect();
    let key = build_key_statement(&pp.a_mat, &kps[0].pk_b, &sp, b"k").unwrap();

    let (shares, _) = sss_share(100, 4, 1, sp.p, &mut rng).unwrap();
    let mut cts = Vec::new();
    let mut rands = Vec::new();
    for (pk, &m) in pks.iter().zip(&shares.values) {
        let (ct, r) = pke_encrypt(&pp.a_mat, pk, m, &sp, &mut rng).unwrap();
        cts.push(ct);
        rands.push(r);
    }
    let h = parity_matrix(4, 1, sp.p).unwrap();
    let share = build_share_statement(&pp.a_mat, &pks, &cts, Some(&h), 1, &sp, b"s").unwrap();
    let dw = pke_decrypt(&kps[1].sk_s, &cts[1], &sp).unwrap();
    let dec = build_dec_statement(&pp.a_mat, &kps[1].pk_b, &cts[1], dw.message, &sp, b"d").unwrap();
    let list = vec![
        (pp.crs0.clone(), key, key_witness(&kps[0])),
        (pp.crs1.clone(), share, share_witness(&rands, &shares.values, &sp)),
        (pp.crs2.clone(), dec, dec_witness(&kps[1], &dw)),
    ];
    (pp, list)
}

#[test]
fn completeness_per_relation() {
    let (pp, list) = statements(1);
    let mut rng = Rng::from_u64(2);
    for (crs, stmt, w) in &list {
        for _ in 0..1000 {
            let pf = pp.backend.prove(crs, stmt, w, &mut rng).unwrap();
            assert!(pp.backend.verify(crs, stmt, &pf), "{:?}", crs.relation);
        }
    }
}

#[test]
fn norm_gap_is_real() {
    let (pp, list) = statements(3);
    let mut rng = Rng::from_u64(4);
    for (crs, stmt, w) in &list {
        assert!(norm_l2(w) <= stmt.bound_zk);
        assert!(stmt.bound_zk < stmt.verify_bound());
        let pf = pp.backend.prove(crs, stmt, w, &mut rng).unwrap();
        for z in &pf.responses {
            assert!(norm_l2(z) <= stmt.verify_bound());
        }
    }
}

#[test]
fn single_coordinate_mutations_rejected() {
    let (pp, list) = statements(5);
    let mut rng = Rng::from_u64(6);
    for (crs, stmt, w) in &list {
        let pf = pp.backend.prove(crs, stmt, w, &mut rng).unwrap();
        let mut rejected = 0;
        for _ in 0..1000 {
            let mut bad = pf.clone();
            let k = rng.uniform_below(bad.rep as u64) as usize;
            let i = rng.uniform_below(stmt.witness_dim() as u64) as usize;
            bad.responses[k].0[i] += 1;
            rejected += !pp.backend.verify(crs, stmt, &bad) as u32;
        }
        assert!(rejected >= 999, "{:?}: {rejected}", crs.relation);
    }
}

#[test]
fn statement_mutations_rejected() {
    let (pp, list) = statements(7);
    let mut rng = Rng::from_u64(8);
    for (crs, stmt, w) in &list {
        let pf = pp.backend.prove(crs, stmt, w, &mut rng).unwrap();
        let q = stmt.target.modulus();
        let mut rejected = 0;
        for _ in 0..1000 {
            let mut bad = stmt.clone();
            if rng.uniform_below(2) == 0 {
                let i = rng.uniform_below(bad.target.len() as u64) as usize;
                let v = q.add(bad.target.entries()[i], 1 + rng.uniform_below(q.value() - 1));
                bad.target.set(i, v);
            } else {
                let r = rng.uniform_below(bad.m_mat.rows() as u64) as usize;
                let c = rng.uniform_below(bad.m_mat.cols() as u64) as usize;
                let v = q.add(bad.m_mat.get(r, c), 1 + rng.uniform_below(q.value() - 1));
                bad.m_mat.set(r, c, v);
            }
            rejected += !pp.backend.verify(crs, &bad, &pf) as u32;
        }
        assert!(rejected >= 999, "{:?}: {rejected}", crs.relation);
    }
}

#[test]
fn proofs_do_not_transfer_between_statements_or_relations() {
    let (pp, list) = statements(9);
    let mut rng = Rng::from_u64(10);
    let (crs, stmt, w) = &list[0];
    let pf = pp.backend.prove(crs, stmt, w, &mut rng).unwrap();
    let mut relabeled = stmt.clone();
    relabeled.domain_tag = b"other".to_vec();
    assert!(!pp.backend.verify(crs, &relabeled, &pf));
    assert!(!pp.backend.verify(&list[2].0, stmt, &pf));
    let (_, other, _) = &statements(11).1[0];
    assert!(!pp.backend.verify(crs, other, &pf));
}

#[test]
fn crs_reuse_across_many_proofs() {
    let (pp, list) = statements(12);
    let mut rng = Rng::from_u64(13);
    let (crs, stmt, w) = &list[2];
    for _ in 0..100 {
        let pf = pp.backend.prove(crs, stmt, w, &mut rng).unwrap();
        assert!(pp.backend.verify(crs, stmt, &pf));
    }
    assert_eq!(proof_setup(RelationId::Dec, &pp.setup_seed), *crs);
}

#[test]
fn perturbed_message_breaks_parity_rows() {
    let sp = toy(4, 1);
    let pp = pvss_setup(&sp, &[1; 32]).unwrap();
    let mut rng = Rng::from_u64(14);
    let kps: Vec<_> = (0..4)
        .map(|_| lbcn_core::pke::pke_keygen(&pp.a_mat, &sp, &mut rng).unwrap())
        .collect();
    let pks: Vec<ZqVector> = kps.iter().map(|k| k.pk_b.clone()).collect();
    let (shares, _) = sss_share(5, 4, 1, sp.p, &mut rng).unwrap();
    let mut msgs = shares.values.clone();
    msgs[2] = (msgs[2] + 1) % 257;
    let mut cts = Vec::new();
    let mut rands = Vec::new();
    for (pk, &m) in pks.iter().zip(&msgs) {
        let (ct, r) = pke_encrypt(&pp.a_mat, pk, m, &sp, &mut rng).unwrap();
        cts.push(ct);
        rands.push(r);
    }
    let h = parity_matrix(4, 1, sp.p).unwrap();
    let stmt = build_share_statement(&pp.a_mat, &pks, &cts, Some(&h), 1, &sp, b"").unwrap();
    let w = share_witness(&rands, &msgs, &sp);
    let mw = mat_vec_mul(&stmt.m_mat, &w).unwrap();
    // encryption rows hold, some parity row does not
    let enc_rows = 4 * (sp.v + 1);
    assert_eq!(mw.entries()[..enc_rows], stmt.target.entries()[..enc_rows]);
    assert_ne!(mw.entries()[enc_rows..], stmt.target.entries()[enc_rows..]);
    assert!(pp.backend.prove(&pp.crs1, &stmt, &w, &mut rng).is_err());
}

/// Two witnesses for `x + y + z = 6 (mod 97)` with different directions.
/// The first response coordinate, taken over repetitions whose challenge bit
/// is one, must have the same distribution under both.
#[test]
fn responses_hide_the_witness() {
    let q = Modulus::new(97).unwrap();
    let m = ZqMatrix::from_reduced(1, 3, vec![1, 1, 1], q).unwrap();
    let target = ZqVector::from_reduced(vec![6], q).unwrap();
    let rep = 40;
    let be = SigmaFs::new(rep);
    let stmt = LinearStatement::new(m, target, 5.0, SigmaFs::slack_for(rep, 3), b"zk".to_vec()).unwrap();
    let crs = proof_setup(RelationId::Key, &[0; 32]);
    let witnesses = [ZVector(vec![4, 1, 1]), ZVector(vec![0, 3, 3])];
    let target_samples = 100_000;
    let mut samples: Vec<Vec<i64>> = vec![Vec::new(), Vec::new()];
    for (k, w) in witnesses.iter().enumerate() {
        let mut rng = Rng::from_u64(100 + k as u64);
        while samples[k].len() < target_samples {
            let pf = be.prove(&crs, &stmt, w, &mut rng).unwrap();
            for (i, z) in pf.responses.iter().enumerate() {
                if pf.challenge(i) && samples[k].len() < target_samples {
                    samples[k].push(z.0[0]);
                }
            }
        }
    }
    // equal-mass bins from the pooled sample
    let mut pooled: Vec<i64> = samples.concat();
    pooled.sort_unstable();
    let bins = 40;
    let edges: Vec<i64> = (1..bins).map(|b| pooled[b * pooled.len() / bins]).collect();
    let bin_of = |x: i64| edges.partition_point(|&e| e <= x);
    let mut counts = vec![[0f64; 2]; bins];
    for (k, s) in samples.iter().enumerate() {
        for &x in s {
            counts[bin_of(x)][k] += 1.0;
        }
    }
    let counts: Vec<[f64; 2]> = counts.into_iter().filter(|c| c[0] + c[1] > 0.0).collect();
    let n = [samples[0].len() as f64, samples[1].len() as f64];
    let total = n[0] + n[1];
    let mut stat = 0.0;
    for c in &counts {
        let row = c[0] + c[1];
        for k in 0..2 {
            let e = row * n[k] / total;
            stat += (c[k] - e).powi(2) / e;
        }
    }
    let pval = ChiSquared::new((counts.len() - 1) as f64).unwrap().sf(stat);
    assert!(pval > 0.001, "chi2 = {stat}, p = {pval}");
}
