mod common;

use proptest::prelude::*;

use star_core::routing::RANDOM_TARGETS;
use star_core::{AgentId, ExecStatus};
use star_executor::{run_inference, InferenceConfig};

use common::*;

fn status() -> impl Strategy<Value = ExecStatus> {
    prop::sample::select(vec![ExecStatus::Succ, ExecStatus::Fail, ExecStatus::Block, ExecStatus::Miss])
}

fn counts() -> impl Strategy<Value = Vec<(AgentId, ExecStatus, AgentId, f64)>> {
    let from = prop::sample::select(AgentId::SPECIALISTS.to_vec());
    let to = prop::sample::select(RANDOM_TARGETS.to_vec());
    prop::collection::vec((from, status(), to, 0.1f64..5.0), 0..40)
}

fn script() -> impl Strategy<Value = Script> {
    prop::collection::vec(prop::collection::vec(status(), 1..4), 6).prop_map(|seqs| {
        let mut s = Script::default();
        for (a, seq) in AgentId::SPECIALISTS.into_iter().zip(seqs) {
            s = s.with(a, &seq);
        }
        s
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn runs_terminate_within_budget(counts in counts(), script in script(), t in 2usize..=12) {
        let k = kernel_from_counts(&counts);
        let cfg = InferenceConfig::new(0.4, t).unwrap();
        let r = run_inference("q", &k, &script, &cfg);
        prop_assert!(r.trace.steps.len() <= t);
        prop_assert_eq!(r.trace.steps.first(), Some(&(AgentId::Head, ExecStatus::Succ)));
        prop_assert_eq!(r.trace.steps.last(), Some(&(AgentId::Fusion, ExecStatus::Succ)));
        prop_assert!(!r.answer.trim().is_empty());
        prop_assert_eq!(r.trace.steps.len(), r.rounds.len() + 2);
    }

    #[test]
    fn retired_agents_never_run_again(counts in counts(), script in script()) {
        let k = kernel_from_counts(&counts);
        let r = run_inference("q", &k, &script, &InferenceConfig::default());
        let mut retired = std::collections::BTreeSet::new();
        for round in &r.rounds {
            for a in &round.activated {
                prop_assert!(!retired.contains(a), "{} re-ran after FAIL", a);
            }
            retired.extend(round.results.iter().filter(|(_, s)| *s == ExecStatus::Fail).map(|(a, _)| *a));
        }
        prop_assert_eq!(&retired, &r.retired);
        prop_assert!(!r.retired.contains(&AgentId::Fusion));
    }

    #[test]
    fn board_only_grows(counts in counts(), script in script()) {
        let k = kernel_from_counts(&counts);
        let r = run_inference("q", &k, &script, &InferenceConfig::default());
        prop_assert!(r.snapshots.windows(2).all(|w| w[0] < w[1]));
        prop_assert_eq!(*r.snapshots.last().unwrap(), r.board.len());
        for (i, e) in r.board.entries().iter().enumerate() {
            prop_assert_eq!(e.step, i);
        }
        // re-running with a smaller budget yields a board whose entries
        // before the FUSION record are a prefix of the longer run's
        let short = run_inference("q", &k, &script, &InferenceConfig::new(0.4, 4).unwrap());
        let n = short.board.len() - 1;
        prop_assert_eq!(&short.board.entries()[..n], &r.board.entries()[..n]);
    }

    #[test]
    fn scheduling_does_not_change_the_outcome(counts in counts(), script in script(), p in 2usize..8) {
        let k = kernel_from_counts(&counts);
        let serial = run_inference("q", &k, &script, &InferenceConfig::default().with_parallelism(1));
        let parallel = run_inference("q", &k, &script, &InferenceConfig::default().with_parallelism(p));
        prop_assert_eq!(serial, parallel);
    }
}
