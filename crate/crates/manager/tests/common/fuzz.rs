//! Randomized interaction runs against a cached and an uncached manager.

use std::collections::BTreeSet;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use staging_core::site::synthetic;
use staging_core::{Token, Utterance};
use staging_manager::{InteractionManager, ManagerConfig, ManagerError};

#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct FuzzReport {
    pub turns: usize,
    pub accepted: usize,
    pub rejected: usize,
    pub completions: usize,
    pub identity_violations: usize,
    pub replays: usize,
    pub replay_mismatches: usize,
    pub cache_mismatches: usize,
    pub cacheable_sites: usize,
}

struct Live {
    token: String,
    site_id: String,
    accepted: Vec<Utterance>,
}

fn manager(cache_enabled: bool, seed: u64) -> InteractionManager {
    InteractionManager::new(ManagerConfig {
        cache_enabled,
        ..ManagerConfig::default()
    })
    .with_seed(seed)
}

fn outcome<T>(r: &Result<T, ManagerError>, json: impl Fn(&T) -> String) -> String {
    match r {
        Ok(v) => json(v),
        Err(e) => format!("error:{}", e.code()),
    }
}

pub fn run(turns: usize, seed: u64) -> FuzzReport {
    let mut rng = StdRng::seed_from_u64(seed);
    let cached = manager(true, seed);
    let plain = manager(false, seed);
    let replay = manager(true, seed ^ 0x5eed);
    let docs: Vec<String> = [
        synthetic::mini_congress(),
        synthetic::mini_congress_four(),
        synthetic::dc_site(),
        synthetic::votesmart_540(),
    ]
    .iter()
    .map(|t| t.to_json())
    .collect();
    let mut site_ids = Vec::new();
    for d in &docs {
        let a = cached.ingest_site(d).unwrap();
        let b = plain.ingest_site(d).unwrap();
        replay.ingest_site(d).unwrap();
        assert_eq!(a, b);
        site_ids.push(a.site_id);
    }

    let mut report = FuzzReport {
        cacheable_sites: cached.sites().iter().filter(|s| s.cacheable).count(),
        ..FuzzReport::default()
    };
    let mut live: Vec<Live> = Vec::new();
    let stranger = Token::new("stranger").unwrap();

    let check_replay = |s: &Live, report: &mut FuzzReport| {
        report.replays += 1;
        let fresh = replay.create_session(&s.site_id).unwrap();
        for u in &s.accepted {
            let r = replay.submit_input(fresh.session.as_str(), u).unwrap();
            if r.rejected {
                report.replay_mismatches += 1;
                return;
            }
        }
        let want = cached.snapshot(&s.token).unwrap();
        let got = replay.snapshot(fresh.session.as_str()).unwrap();
        if (want.site_state, want.dialog_state, want.input_so_far)
            != (got.site_state, got.dialog_state, got.input_so_far)
        {
            report.replay_mismatches += 1;
        }
    };

    while report.turns < turns {
        if live.is_empty() || rng.gen_bool(0.04) {
            let site_id = site_ids.choose(&mut rng).unwrap().clone();
            let a = cached.create_session(&site_id).unwrap();
            let b = plain.create_session(&site_id).unwrap();
            if a.to_json() != b.to_json() {
                report.cache_mismatches += 1;
            }
            live.push(Live {
                token: a.session.as_str().to_string(),
                site_id,
                accepted: Vec::new(),
            });
            continue;
        }
        let i = rng.gen_range(0..live.len());
        let roll: f64 = rng.gen();
        if roll < 0.08 {
            let n = rng.gen_range(1..=3);
            let a = cached.step_back(&live[i].token, n);
            let b = plain.step_back(&live[i].token, n);
            if outcome(&a, |r| r.to_json()) != outcome(&b, |r| r.to_json()) {
                report.cache_mismatches += 1;
            }
            if a.is_ok() {
                let keep = live[i].accepted.len() - n;
                live[i].accepted.truncate(keep);
            }
            continue;
        }
        if roll < 0.12 {
            let a = cached.reflect(&live[i].token);
            let b = plain.reflect(&live[i].token);
            if outcome(&a, |s| format!("{s:?}")) != outcome(&b, |s| format!("{s:?}")) {
                report.cache_mismatches += 1;
            }
            continue;
        }

        report.turns += 1;
        let token = live[i].token.clone();
        let valid: Vec<Token> = cached.reflect(&token).unwrap().into_iter().collect();
        let site = cached.site(&live[i].site_id).unwrap();
        let universe: Vec<Token> = site.tree.token_universe().iter().cloned().collect();
        let size = *[1usize, 1, 1, 2, 2, 3].choose(&mut rng).unwrap();
        let mut picked: BTreeSet<Token> = BTreeSet::new();
        let mut words = Vec::new();
        for _ in 0..size {
            let t = match rng.gen_range(0..10) {
                0 => stranger.clone(),
                1 | 2 => universe.choose(&mut rng).unwrap().clone(),
                _ => valid.choose(&mut rng).cloned().unwrap_or_else(|| stranger.clone()),
            };
            if rng.gen_bool(0.9) && !picked.insert(t.clone()) {
                continue;
            }
            words.push(t);
        }
        if words.is_empty() {
            words.push(stranger.clone());
        }
        let utt = Utterance::new(words).unwrap();

        let before = cached.snapshot(&token).unwrap();
        let a = cached.submit_input(&token, &utt).unwrap();
        let b = plain.submit_input(&token, &utt).unwrap();
        if a.to_json() != b.to_json() {
            report.cache_mismatches += 1;
        }
        if a.rejected {
            report.rejected += 1;
            if cached.snapshot(&token).unwrap() != before {
                report.identity_violations += 1;
            }
            if plain.snapshot(&token).unwrap().dialog_state != before.dialog_state {
                report.identity_violations += 1;
            }
        } else {
            report.accepted += 1;
            live[i].accepted.push(utt);
        }
        if a.completed.is_some() {
            report.completions += 1;
            let done = live.swap_remove(i);
            check_replay(&done, &mut report);
        } else if rng.gen_bool(0.02) {
            check_replay(&live[i], &mut report);
        }
    }
    for s in &live {
        check_replay(s, &mut report);
    }
    report
}
