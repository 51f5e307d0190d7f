use bjkit::engine::{Ball, Domain, Engine, WakeOrder};
use proptest::prelude::*;

#[derive(Debug)]
struct Toy;

impl Domain for Toy {
    type Value = u8;
    type Watcher = u32;
    type Payload = Vec<u32>;
    type Acc = ();
    type Stored = Vec<u32>;
}

#[derive(Debug, Clone)]
enum Op {
    Bind(usize, u8),
    Register(Vec<usize>),
    /// Run whatever is queued; each watcher re-registers on its tag's slot
    /// if that slot is still free.
    Drain,
}

const VARS: usize = 6;

fn op() -> impl Strategy<Value = Op> {
    prop_oneof![
        (0..VARS, any::<u8>()).prop_map(|(v, x)| Op::Bind(v, x)),
        proptest::collection::vec(0..VARS, 1..3).prop_map(Op::Register),
        Just(Op::Drain),
    ]
}

fn apply(e: &mut Engine<Toy>, ops: &[Op], tag: &mut u32) {
    for o in ops {
        match o {
            Op::Bind(v, x) => {
                if !e.is_bound(*v) {
                    e.bind(*v, *x);
                }
            }
            Op::Register(vs) => {
                let mut free: Vec<usize> = vs.iter().copied().filter(|&v| !e.is_bound(v)).collect();
                free.dedup();
                if !free.is_empty() {
                    *tag += 1;
                    e.register(*tag, &free);
                }
            }
            Op::Drain => {
                let _ = e.drain(|e, w| -> Result<(), ()> {
                    let slot = w as usize % VARS;
                    if !e.is_bound(slot) {
                        e.register(w, &[slot]);
                    }
                    Ok(())
                });
            }
        }
    }
    let _ = e.drain(|_, _| Ok::<(), ()>(()));
}

proptest! {
    #[test]
    fn raise_restores_the_frame_state(
        before in proptest::collection::vec(op(), 0..12),
        after in proptest::collection::vec(op(), 0..20),
        payload in proptest::collection::vec(any::<u32>(), 0..5),
        fifo in any::<bool>(),
    ) {
        let order = if fifo { WakeOrder::Fifo } else { WakeOrder::DepthFirst };
        let mut e: Engine<Toy> = Engine::with_order(VARS, order);
        let mut tag = 0;
        apply(&mut e, &before, &mut tag);
        e.push_frame(1, ());
        let mark = e.trail_len();
        let snap = e.snapshot();
        e.store_put(payload.clone());
        apply(&mut e, &after, &mut tag);
        e.push_frame(2, ());
        apply(&mut e, &after, &mut tag);
        let caught = e.raise(Ball::new(1, payload.clone()));
        prop_assert_eq!(caught.payload, payload.clone());
        prop_assert_eq!(e.top_frame().unwrap().key, 1);
        prop_assert_eq!(e.trail_len(), mark);
        prop_assert_eq!(e.snapshot(), snap);
        prop_assert_eq!(e.queue_len(), 0);
        prop_assert_eq!(e.store_get(), &payload);
    }

    #[test]
    fn wake_sequence_is_reproducible(ops in proptest::collection::vec(op(), 0..30)) {
        let run = || {
            let mut e: Engine<Toy> = Engine::new(VARS);
            let mut order = Vec::new();
            let mut tag = 0;
            for o in &ops {
                apply(&mut e, std::slice::from_ref(o), &mut tag);
                order.push(e.snapshot());
            }
            order
        };
        prop_assert_eq!(run(), run());
    }
}
