#!/usr/bin/env python3
"""Generate the synthetic fairy-tale corpus used when the original text is unavailable.

The output is deterministic for a given seed. Sentences are drawn from a small
narrative grammar over the bundled character nouns so that word frequencies
are Zipf-like and the common words pass a min-count of 10.
"""

import argparse
import random

HEROES = ["রাজকুমার", "রাজপুত্র", "অরুণ", "বরুণ"]
MAIDENS = ["রাজকন্যা", "কিরণমালা", "রাজকুমারী"]
VILLAINS = ["রাক্ষস", "রাক্ষসী", "দৈত্য", "ডাইনি"]
DONORS = ["সন্ন্যাসী", "সাধু", "মুনি", "বুড়ি"]
HELPERS = ["পক্ষিরাজ", "পরী", "শুক", "ঘোড়া"]
COURT = ["রাজা", "রানী", "মন্ত্রী", "কোটাল"]
PLACES = ["বনে", "নদীর ধারে", "পাহাড়ে", "রাজপুরীতে", "গ্রামে", "সাগরের পারে", "গুহায়", "মাঠে"]
THINGS = ["তলোয়ার", "আংটি", "মালা", "ফুল", "মুক্তা", "পাখি", "জল", "সোনার কাঠি", "রুপার কাঠি"]
ADJ = ["সুন্দর", "ভয়ংকর", "বুড়ো", "ছোট", "বড়", "সোনার", "দুষ্টু", "সাহসী"]
TIMES = ["একদিন", "তারপর", "সেই রাতে", "ভোরবেলা", "অনেক দিন পরে", "হঠাৎ"]

TEMPLATES = [
    "{time} {hero} {place} যাত্রা করল।",
    "{hero} {donor}কে প্রণাম করল।",
    "{donor} {hero}কে একটি {thing} উপহার দিলেন।",
    "{donor} {hero}কে পরীক্ষা করলেন।",
    "{place} এক {adj} {villain} থাকত।",
    "{villain} {place} অত্যাচার চালাত।",
    "{villain} {maiden}কে বন্দী করে রাখল।",
    "{hero} {villain}ের সঙ্গে যুদ্ধ করল।",
    "যুদ্ধে {villain} পরাজিত হল।",
    "{helper} {hero}কে পথ দেখাল।",
    "{hero} {helper}ের পিঠে চড়ে {place} গেল।",
    "{court} {hero}কে {maiden}র খোঁজে পাঠালেন।",
    "{court} বললেন {thing} আনতে হবে।",
    "{hero} {maiden}কে উদ্ধার করল।",
    "{maiden} {hero}কে চিনতে পারল।",
    "{hero} বিজয়ী হয়ে দেশে ফিরে এল।",
    "{court} {hero}র সঙ্গে {maiden}র বিয়ে দিলেন।",
    "{time} {maiden} {place} {thing} খুঁজতে গেল।",
    "{adj} {helper} {maiden}কে {thing} এনে দিল।",
    "{villain} ছল করে {court}কে ভুলিয়ে দিল।",
    "{court} {villain}কে শাস্তি দিলেন।",
    "{hero} আর {maiden} সুখে দিন কাটাতে লাগল।",
]


def zipf_choice(rng, items):
    weights = [1.0 / (i + 1) for i in range(len(items))]
    return rng.choices(items, weights=weights, k=1)[0]


def generate(words, seed):
    rng = random.Random(seed)
    sentences = []
    count = 0
    while True:
        template = zipf_choice(rng, TEMPLATES) if rng.random() < 0.5 else rng.choice(TEMPLATES)
        sentence = template.format(
            time=zipf_choice(rng, TIMES), hero=zipf_choice(rng, HEROES), maiden=zipf_choice(rng, MAIDENS),
            villain=zipf_choice(rng, VILLAINS), donor=zipf_choice(rng, DONORS), helper=zipf_choice(rng, HELPERS),
            court=zipf_choice(rng, COURT), place=zipf_choice(rng, PLACES), thing=zipf_choice(rng, THINGS),
            adj=zipf_choice(rng, ADJ))
        n = len(sentence.split())
        if count + n > words:
            break
        sentences.append(sentence)
        count += n
    # Pad with a closing formula so the total is exact.
    while count < words:
        sentences.append("শেষ।")
        count += 1
    paragraphs = [" ".join(sentences[i:i + 8]) for i in range(0, len(sentences), 8)]
    return "\n\n".join(paragraphs) + "\n"


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--words", type=int, default=2726)
    parser.add_argument("--seed", type=int, default=1907)
    parser.add_argument("--out", default="data/kiranmala_standin.txt")
    args = parser.parse_args()
    with open(args.out, "w", encoding="utf-8") as f:
        f.write(generate(args.words, args.seed))


if __name__ == "__main__":
    main()
