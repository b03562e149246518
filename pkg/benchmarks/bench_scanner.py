#!/usr/bin/env python3
"""Throughput comparison of the scanner backends.

Generates a synthetic corpus of tagged reports, then times tokenization
with every importable backend plus a full parse pass on the selected
one. Run: python benchmarks/bench_scanner.py [--mb 20] [--repeats 3]
"""

from __future__ import annotations

import argparse
import random
import time

from intentweave import parse_report
from intentweave.scanner import BACKEND, available_backends

WORDS = (
    "retrieval evidence corpus neural language benchmark analysis method "
    "training data report citation snippet query answer structure attention"
).split()


def synth_document(rng: random.Random) -> str:
    blocks = []
    for _ in range(rng.randint(2, 5)):
        title = " ".join(rng.choice(WORDS) for _ in range(3)).title()
        blocks.append(f"SECTION; {title}\nTLDR; Short summary. Two sentences.")
        for _ in range(rng.randint(2, 6)):
            words = " ".join(rng.choice(WORDS) for _ in range(rng.randint(30, 90)))
            blocks.append(
                f"<bpit>[PIT-Exposition]: frames the topic <epit> {words} "
                f"<bcit>[CIT-USES]: draws on the cited method <ecit> "
                f"[{rng.randint(1, 20)}] [{rng.randint(1, 20)}]. More {words}."
            )
    return "\n\n".join(blocks) + "\n"


def build_corpus(target_mb: float, seed: int = 7) -> list[str]:
    rng = random.Random(seed)
    docs, total = [], 0
    while total < target_mb * 1_000_000:
        doc = synth_document(rng)
        docs.append(doc)
        total += len(doc)
    return docs


def time_backend(tokenize, docs: list[str], repeats: int) -> tuple[float, int]:
    best = float("inf")
    tokens = 0
    for _ in range(repeats):
        started = time.perf_counter()
        tokens = sum(len(tokenize(doc)) for doc in docs)
        best = min(best, time.perf_counter() - started)
    return best, tokens


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--mb", type=float, default=20.0,
                        help="approximate corpus size in MB")
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    docs = build_corpus(args.mb)
    size_mb = sum(len(d) for d in docs) / 1_000_000
    print(f"corpus: {len(docs)} documents, {size_mb:.1f} MB (selected: {BACKEND})")

    results = {}
    for name, tokenize in sorted(available_backends().items()):
        best, tokens = time_backend(tokenize, docs, args.repeats)
        results[name] = best
        print(f"  tokenize[{name:6s}]  {best:7.3f} s   "
              f"{size_mb / best:7.1f} MB/s   {tokens} tokens")

    if len(results) == 2:
        ratio = results["python"] / results["c"]
        print(f"  speedup c over python: {ratio:.1f}x")

    started = time.perf_counter()
    sections = sum(len(parse_report(doc).sections) for doc in docs)
    elapsed = time.perf_counter() - started
    print(f"  full parse [{BACKEND}]   {elapsed:7.3f} s   "
          f"{size_mb / elapsed:7.1f} MB/s   {sections} sections")


if __name__ == "__main__":
    main()
