//! The engine on its own: a tiny domain where a watcher throws a ball to an
//! older frame, and the catch restores everything bound since.
//!
//! cargo run --example engine_catch_throw

use bjkit::engine::{Ball, Domain, Engine};

#[derive(Debug)]
struct Sum;

impl Domain for Sum {
    type Value = i32;
    // var whose value must stay below the limit
    type Watcher = (usize, i32);
    type Payload = String;
    type Acc = &'static str;
    type Stored = Vec<String>;
}

fn main() {
    let mut e: Engine<Sum> = Engine::new(4);
    e.register((2, 10), &[2]);

    e.push_frame(1, "first");
    e.bind(0, 3);
    e.push_frame(2, "second");
    e.bind(1, 4);
    e.push_frame(3, "third");
    e.bind(2, 12);
    println!("frames {:?}, trail {}", e.frame_keys(), e.trail_len());

    let failed = e.drain(|eng, (var, limit)| {
        let v = *eng.value(var).expect("woken var is bound");
        if v < limit {
            Ok(())
        } else {
            Err(Ball::new(1, format!("x{var} = {v} is not below {limit}")))
        }
    });

    if let Err(ball) = failed {
        let caught = e.raise(ball);
        println!("caught at {} from {}: {}", caught.key, caught.raised_from, caught.payload);
        println!("popped {} frames, undid {} trail entries", caught.popped, caught.undone);
        e.store_mut().push(caught.payload);
    }
    println!("frames {:?}, acc {:?}", e.frame_keys(), e.top_frame().map(|f| f.acc));
    println!("bound: {:?}", (0..4).map(|v| e.value(v).copied()).collect::<Vec<_>>());
    println!("store survives the rewind: {:?}", e.store_get());
}
