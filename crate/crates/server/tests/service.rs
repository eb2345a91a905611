mod common;

use std::collections::BTreeSet;
use std::sync::Barrier;

use common::{query, sample, seeded_config};
use dpverify_core::verification::verify;
use dpverify_server::{ServerConfig, ServiceError, VerificationService};

fn service() -> VerificationService {
    VerificationService::in_memory(ServerConfig::default())
}

#[test]
fn fresh_registration_has_full_budget() {
    let svc = service();
    let id = svc.register_dataset(sample(1), 5.0).unwrap();
    let b = svc.budget_status(&id).unwrap();
    assert_eq!((b.total, b.spent, b.remaining), (5.0, 0.0, 5.0));
    assert!(b.query_log.is_empty());
}

#[test]
fn registrations_get_distinct_ids() {
    let svc = service();
    let a = svc.register_dataset(sample(1), 1.0).unwrap();
    let b = svc.register_dataset(sample(1), 1.0).unwrap();
    assert_ne!(a, b);
}

#[test]
fn zero_budget_rejected() {
    let svc = service();
    let err = svc.register_dataset(sample(1), 0.0).unwrap_err();
    assert_eq!(err.code(), "INVALID_DATASET");
}

#[test]
fn two_queries_compose_sequentially() {
    let svc = service();
    let id = svc.register_dataset(sample(1), 5.0).unwrap();
    let r1 = svc.submit_query(&id, &query(1.0)).unwrap();
    let r2 = svc.submit_query(&id, &query(1.0)).unwrap();
    assert_eq!((r1.epsilon_spent, r1.epsilon_remaining), (1.0, 4.0));
    assert_eq!((r2.epsilon_spent, r2.epsilon_remaining), (2.0, 3.0));
    let b = svc.budget_status(&id).unwrap();
    assert_eq!(b.remaining, 3.0);
    assert_eq!(b.spent, b.query_log.iter().map(|e| e.epsilon).sum::<f64>());
    let ids: Vec<&str> = b.query_log.iter().map(|e| e.query_id.as_str()).collect();
    assert_eq!(ids, vec![r1.query_id.as_str(), r2.query_id.as_str()]);
}

#[test]
fn over_budget_query_rejected_without_debit() {
    let svc = service();
    let id = svc.register_dataset(sample(1), 1.0).unwrap();
    let before = svc.budget_status(&id).unwrap();
    let err = svc.submit_query(&id, &query(2.0)).unwrap_err();
    assert!(matches!(err, ServiceError::BudgetExceeded { .. }));
    let after = svc.budget_status(&id).unwrap();
    assert_eq!(after, before);
    assert_eq!(after.remaining, 1.0);
}

#[test]
fn invalid_queries_cost_nothing() {
    let svc = service();
    let id = svc.register_dataset(sample(1), 5.0).unwrap();
    let mut cases = Vec::new();
    let mut q = query(1.0);
    q.m = 1;
    cases.push((q, "INVALID_QUERY"));
    let mut q = query(0.0);
    q.epsilon = 0.0;
    cases.push((q, "INVALID_QUERY"));
    let mut q = query(1.0);
    q.sd0 = -1.0;
    cases.push((q, "INVALID_QUERY"));
    let mut q = query(1.0);
    q.m = 501;
    cases.push((q, "INVALID_QUERY"));
    let mut q = query(1.0);
    q.seed = Some(3);
    cases.push((q, "INVALID_QUERY"));
    let mut q = query(1.0);
    q.tolerance.alpha = -1.0;
    cases.push((q, "INVALID_QUERY"));
    let mut q = query(1.0);
    q.variable = "income".into();
    cases.push((q, "UNKNOWN_VARIABLE"));
    for (q, code) in cases {
        assert_eq!(svc.submit_query(&id, &q).unwrap_err().code(), code, "{q:?}");
    }
    assert_eq!(svc.budget_status(&id).unwrap().spent, 0.0);
    assert_eq!(
        svc.submit_query("nope", &query(1.0)).unwrap_err().code(),
        "UNKNOWN_DATASET"
    );
    assert_eq!(
        svc.budget_status("nope").unwrap_err().code(),
        "UNKNOWN_DATASET"
    );
}

#[test]
fn budget_reads_are_idempotent() {
    let svc = service();
    let id = svc.register_dataset(sample(1), 5.0).unwrap();
    svc.submit_query(&id, &query(0.5)).unwrap();
    assert_eq!(
        svc.budget_status(&id).unwrap(),
        svc.budget_status(&id).unwrap()
    );
}

#[test]
fn fixed_seed_replays_bit_identically() {
    let svc = VerificationService::in_memory(seeded_config());
    let a = svc.register_dataset(sample(7), 10.0).unwrap();
    let b = svc.register_dataset(sample(7), 10.0).unwrap();
    let mut q = query(1.0);
    q.seed = Some(424_242);
    q.include_draws = true;
    let ra = svc.submit_query(&a, &q).unwrap();
    let rb = svc.submit_query(&b, &q).unwrap();
    assert_eq!(ra.s_noisy.to_bits(), rb.s_noisy.to_bits());
    assert_eq!(ra.posterior, rb.posterior);

    let direct = verify(
        &sample(7),
        q.estimate0,
        q.sd0,
        q.estimand,
        &q.tolerance,
        q.m,
        q.epsilon,
        424_242,
    )
    .unwrap();
    assert_eq!(ra.s_noisy.to_bits(), direct.s_noisy.to_bits());
}

#[test]
fn draws_only_on_request() {
    let svc = service();
    let id = svc.register_dataset(sample(1), 5.0).unwrap();
    let plain = svc.submit_query(&id, &query(1.0)).unwrap();
    assert!(plain.posterior.draws.is_none());
    let mut q = query(1.0);
    q.include_draws = true;
    let with = svc.submit_query(&id, &q).unwrap();
    assert_eq!(with.posterior.draws.unwrap().len(), 1_800);
}

#[test]
fn response_has_no_slot_for_confidential_values() {
    let svc = service();
    let id = svc.register_dataset(sample(1), 5.0).unwrap();
    let resp = svc.submit_query(&id, &query(1.0)).unwrap();
    let v = serde_json::to_value(&resp).unwrap();
    let keys: BTreeSet<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(
        keys,
        BTreeSet::from([
            "query_id",
            "s_noisy",
            "posterior",
            "epsilon_spent",
            "epsilon_remaining"
        ])
    );
    let post: BTreeSet<&str> = v["posterior"]
        .as_object()
        .unwrap()
        .keys()
        .map(String::as_str)
        .collect();
    assert_eq!(
        post,
        BTreeSet::from(["median", "q05", "q25", "q75", "q95", "iters", "burnin"])
    );
}

#[test]
fn concurrent_clients_never_overspend() {
    let svc = service();
    let id = svc.register_dataset(sample(3), 10.0).unwrap();
    let barrier = Barrier::new(64);
    let results: Vec<Result<_, ServiceError>> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..64)
            .map(|_| {
                s.spawn(|| {
                    barrier.wait();
                    svc.submit_query(&id, &query(1.0))
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let ok = results.iter().filter(|r| r.is_ok()).count();
    assert_eq!(ok, 10);
    assert!(results
        .iter()
        .filter_map(|r| r.as_ref().err())
        .all(|e| matches!(e, ServiceError::BudgetExceeded { .. })));
    let b = svc.budget_status(&id).unwrap();
    assert_eq!(b.spent, 10.0);
    assert_eq!(b.query_log.len(), 10);
}

#[test]
fn journal_survives_restart() {
    let dir = tempfile::tempdir().unwrap();
    let config = ServerConfig {
        journal_path: Some(dir.path().join("server.journal")),
        ..seeded_config()
    };
    let mut q = query(1.5);
    q.seed = Some(99);
    let (id, status, first) = {
        let svc = VerificationService::new(config.clone()).unwrap();
        let id = svc.register_dataset(sample(5), 4.0).unwrap();
        let other = svc.register_dataset(sample(6), 2.0).unwrap();
        let first = svc.submit_query(&id, &q).unwrap();
        svc.submit_query(&id, &q).unwrap();
        svc.submit_query(&other, &query(0.5)).unwrap();
        let status = svc.budget_status(&id).unwrap();
        (id, status, first)
    };
    let svc = VerificationService::new(config).unwrap();
    assert_eq!(svc.budget_status(&id).unwrap(), status);
    assert_eq!(svc.registration(&id).unwrap().sample, sample(5));
    assert!(matches!(
        svc.submit_query(&id, &q),
        Err(ServiceError::BudgetExceeded { .. })
    ));
    let mut small = q.clone();
    small.epsilon = 1.0;
    let replayed = svc.submit_query(&id, &small).unwrap();
    assert_eq!(replayed.epsilon_remaining, 0.0);
    assert_ne!(replayed.query_id, first.query_id);
}
