#!/usr/bin/env python3
# Copyright 2026 The embed-curate Authors
# SPDX-License-Identifier: Apache-2.0
"""Regenerates the small end-to-end fixture corpus under tests/fixtures/.

Five exocentric videos give 50 five-second clips; detections arrive at
4 fps with a few dropped frames. Output is fully determined by SEED.
"""

import json
import random
from pathlib import Path

SEED = 2026
FPS = 4
WIDTH, HEIGHT = 640, 360
VIDEOS = [("exo_a", 50.0), ("exo_b", 50.0), ("exo_c", 50.0), ("exo_d", 50.0), ("exo_e", 48.3)]

ASR = [
    ("exo_a", 1.2, "so the first thing i'm gonna do is grab my cutting board", 0.91),
    ("exo_a", 7.4, "and we're just gonna slice the onion nice and thin", 0.88),
    ("exo_a", 13.9, "you can see the color changing already", 0.42),
    ("exo_a", 22.1, "now i'll pour a little olive oil into the pan", 0.83),
    ("exo_a", 36.6, "give that a good stir", 0.77),
    ("exo_a", 44.0, "thanks for watching and don't forget to subscribe", 0.05),
    ("exo_b", 2.5, "i'm just gonna start by cutting it in half", 0.93),
    ("exo_b", 9.8, "then i take the seeds out with a spoon", 0.86),
    ("exo_b", 17.3, "this part is really important", 0.31),
    ("exo_b", 26.0, "we're gonna tighten the bolt with the wrench", 0.9),
    ("exo_b", 31.7, "hold it steady with your left hand", 0.72),
    ("exo_b", 45.5, "alright let's move on", 0.48),
    ("exo_c", 0.4, "first we'll unscrew the cover plate", 0.87),
    ("exo_c", 6.6, "pull the old wire out gently", 0.81),
    ("exo_c", 12.2, "my cat is walking by lol", 0.12),
    ("exo_c", 19.9, "strip about half an inch of insulation", 0.95),
    ("exo_c", 28.4, "wrap it clockwise around the screw", 0.89),
    ("exo_c", 41.0, "put the cover back on", 0.79),
    ("exo_d", 3.3, "let's knead the dough for a few minutes", 0.92),
    ("exo_d", 10.5, "sprinkle some flour on the counter", 0.84),
    ("exo_d", 16.0, "it should feel smooth and elastic", 0.55),
    ("exo_d", 24.75, "now roll it out with the rolling pin", 0.9),
    ("exo_d", 33.2, "cut out the circles with a glass", 0.87),
    ("exo_d", 47.9, "and that's it for today", 0.08),
    ("exo_e", 1.0, "okay i'm gonna sand down this edge", 0.9),
    ("exo_e", 8.25, "wipe off the dust with a cloth", 0.85),
    ("exo_e", 15.6, "brush on a thin coat of stain", 0.88),
    ("exo_e", 21.3, "i really like how this turned out", 0.37),
    ("exo_e", 30.0, "screw the hinge onto the door", 0.91),
    ("exo_e", 46.2, "check that it swings freely", 0.74),
]

# Rephrase outputs keyed by the ASR text. Missing keys make the stub echo
# its input; an empty output is rejected downstream.
REPHRASED = {
    "so the first thing i'm gonna do is grab my cutting board": "Grab the cutting board.",
    "and we're just gonna slice the onion nice and thin": "Slice the onion thinly.",
    "now i'll pour a little olive oil into the pan": "Pour olive oil into the pan.",
    "give that a good stir": "Stir the pan.",
    "i'm just gonna start by cutting it in half": "Cut the object in half.",
    "then i take the seeds out with a spoon": "Assistant: Scoop out the seeds with a spoon.",
    "we're gonna tighten the bolt with the wrench": "Tighten the bolt with the wrench.",
    "hold it steady with your left hand": "Hold the part steady with the left hand.",
    "first we'll unscrew the cover plate": "Unscrew the cover plate.",
    "pull the old wire out gently": "Pull out the old wire.",
    "strip about half an inch of insulation": "Strip the wire insulation.",
    "wrap it clockwise around the screw": "",
    "let's knead the dough for a few minutes": "Knead the dough.",
    "sprinkle some flour on the counter": "Sprinkle flour on the counter.",
    "it should feel smooth and elastic": "Press the dough.",
    "now roll it out with the rolling pin": "Roll out the dough with the rolling pin.",
    "okay i'm gonna sand down this edge": "Sand the edge of the board.",
    "wipe off the dust with a cloth": "Wipe the dust off with a cloth.",
    "brush on a thin coat of stain": "Brush stain onto the wood.",
    "screw the hinge onto the door": "Screw the hinge onto the door.",
}

CAPTIONS = [
    ("exo_a", 5.0, 10.0, "#C C slices an onion with a knife", 4.2),
    ("exo_a", 20.0, 25.0, "#C C pours oil into a pan", 6.1),
    ("exo_b", 0.0, 5.0, "#C C cuts a melon", 3.7),
    ("exo_b", 25.0, 30.0, "#C C turns a wrench", 12.5),
    ("exo_c", 15.0, 20.0, "#C C strips a wire", 5.5),
    ("exo_c", 40.0, 45.0, "#C C holds a plate", 9.99),
    ("exo_d", 20.0, 25.0, "#C C rolls dough", 2.8),
    ("exo_d", 30.0, 35.0, "#C C presses a glass into dough", 17.0),
    ("exo_e", 5.0, 10.0, "#C C wipes a board with a cloth", 4.9),
    ("exo_e", 45.0, 48.3, "#C C opens a door", 7.3),
    ("exo_e", 35.0, 40.0, "#C C looks around", 8.0),
    ("exo_a", 45.0, 50.0, "#C C waves", 25.0),
]

EGO = [
    ("ego_01", 2.0, "#C C picks up a knife from the table", 1.0, 3.0),
    ("ego_01", 4.5, "#C C cuts the tomato on the board", 4.0, 5.0),
    ("ego_01", 7.0, "#C C #unsure", None, None),
    ("ego_01", 9.25, "#C C puts the knife down", 8.5, 10.0),
    ("ego_02", 1.5, "#C C opens the drawer", None, None),
    ("ego_02", 3.0, "#C C looks", None, None),
    ("ego_02", 6.0, "#C C takes a spoon from the drawer", 5.5, 6.5),
    ("ego_02", 8.0, "#C C stirs the soup #Unsure with spoon", None, None),
    ("ego_03", 0.5, "#C C lifts the lid of the pot", 0.0, 1.0),
    ("ego_03", 2.75, "#C C pours water into the pot", 2.0, 3.5),
    ("ego_03", 5.0, "#C C turns on the stove", None, None),
    ("ego_03", 7.5, "#C C", None, None),
]


def box(rng, cx, cy, w, h):
    x0 = max(0.0, min(WIDTH - 1.0, cx - w / 2))
    y0 = max(0.0, min(HEIGHT - 1.0, cy - h / 2))
    x1 = max(x0, min(float(WIDTH), cx + w / 2))
    y1 = max(y0, min(float(HEIGHT), cy + h / 2))
    return [round(x0, 1), round(y0, 1), round(x1, 1), round(y1, 1)]


def detections(rng):
    out = []
    for vid, duration in VIDEOS:
        n_clips = int(duration // 5) + (1 if duration % 5 >= 1.0 else 0)
        # Per-clip interaction level in [0, 1]; a few clips are busy, most are idle.
        levels = [rng.choice([0.05, 0.15, 0.3, 0.5, 0.7, 0.9]) for _ in range(n_clips)]
        t = 0.0
        step = 1.0 / FPS
        i = 0
        while t < duration:
            ts = round(i * step, 2)
            i += 1
            t = ts + step
            if ts >= duration:
                break
            if rng.random() < 0.06:
                continue  # dropped frame
            level = levels[min(int(ts // 5), n_clips - 1)]
            hands, objects = [], []
            n_hands = rng.choices([0, 1, 2], weights=[1 - level, 0.5, level + 0.2])[0]
            for h in range(n_hands):
                cx = rng.uniform(120, 520)
                cy = rng.uniform(100, 300)
                hands.append({
                    "box": box(rng, cx, cy, rng.uniform(40, 90), rng.uniform(40, 90)),
                    "probability": round(rng.uniform(0.3, 1.0) * (0.5 + level / 2), 3),
                    "side": ["left", "right"][h % 2],
                    "in_contact": rng.random() < level,
                })
            if rng.random() < level + 0.1:
                for _ in range(rng.randint(1, 2)):
                    objects.append({
                        "box": box(rng, rng.uniform(100, 540), rng.uniform(80, 300),
                                   rng.uniform(30, 160), rng.uniform(30, 120)),
                        "probability": round(rng.uniform(0.4, 0.99), 3),
                    })
            out.append({"video_id": vid, "timestamp_s": ts, "frame_width": WIDTH,
                        "frame_height": HEIGHT, "hands": hands, "objects": objects})
    rng.shuffle(out)  # ingestion must not depend on input order
    return out


def write_jsonl(path, rows):
    path.write_text("".join(json.dumps(r, separators=(",", ":")) + "\n" for r in rows))


def main():
    rng = random.Random(SEED)
    root = Path(__file__).resolve().parent.parent / "tests" / "fixtures"
    root.mkdir(parents=True, exist_ok=True)
    write_jsonl(root / "detections.jsonl", detections(rng))
    write_jsonl(root / "narrations.jsonl", [
        {"video_id": v, "timestamp_s": t, "text": text, "source": "original_asr", "alignability": a}
        for v, t, text, a in ASR])
    write_jsonl(root / "videos.jsonl", [
        {"video_id": v, "duration_s": d, "frame_width": WIDTH, "frame_height": HEIGHT}
        for v, d in VIDEOS])
    write_jsonl(root / "captions.jsonl", [
        {"video_id": v, "start_s": s, "end_s": e, "text": text, "perplexity": p}
        for v, s, e, text, p in CAPTIONS])
    ego = []
    for v, t, text, s, e in EGO:
        rec = {"video_id": v, "timestamp_s": t, "text": text, "source": "ego_manual"}
        if s is not None:
            rec["generation_meta"] = {"clip_start_s": s, "clip_end_s": e}
        ego.append(rec)
    write_jsonl(root / "ego_narrations.jsonl", ego)
    write_jsonl(root / "stub_responses.jsonl",
                [{"input": k, "output": v} for k, v in sorted(REPHRASED.items())])
    (root / "config.json").write_text(json.dumps({
        "inputs": {
            "detections": "detections.jsonl",
            "narrations": "narrations.jsonl",
            "videos": "videos.jsonl",
            "captions": "captions.jsonl",
            "ego_narrations": "ego_narrations.jsonl",
        },
        "output_dir": "../../build/fixture_run",
        "clip_len_s": 5.0,
        "frames_per_clip": 4,
        "budget": 0.6,
        "margin": 0.1,
        "align_threshold": 0.5,
        "ppl_max": 10.0,
        "seed": 7,
        "workers": 1,
        "service": {"stub_responses": "stub_responses.jsonl", "concurrency": 4},
    }, indent=2) + "\n")


if __name__ == "__main__":
    main()
