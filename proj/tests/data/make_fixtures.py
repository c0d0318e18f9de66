#!/usr/bin/env python3
"""Regenerates the synthetic corpora and the Porter reference sample.

Run from anywhere: python3 tests/data/make_fixtures.py
The Porter sample needs nltk (PorterStemmer, ORIGINAL_ALGORITHM mode).
"""
import csv
import random
import re
from pathlib import Path

HERE = Path(__file__).resolve().parent

ECOM = {
    "Household": dict(
        n=76,
        nouns=["pressure cooker", "bedsheet set", "wall clock", "dinner plate set", "storage container",
               "curtain pair", "water bottle", "kitchen knife", "bath towel", "table lamp", "door mat",
               "non-stick pan", "spice rack", "cushion cover"],
        adj=["stainless steel", "ceramic", "handcrafted", "microwave safe", "durable", "decorative",
             "space saving", "premium quality", "eco friendly"],
        extra=["Ideal for the modern kitchen.", "Easy to clean and store.", "Adds warmth to any room.",
               "Perfect gift for housewarming.", "Dishwasher safe.", "Pack of 2."],
    ),
    "Books": dict(
        n=44,
        nouns=["novel", "paperback", "hardcover edition", "guide to investing", "cookbook",
               "history of india", "collection of poems", "exam preparation book", "biography"],
        adj=["bestselling", "illustrated", "revised", "classic", "award winning", "annotated"],
        extra=["Written by a celebrated author.", "Includes a new foreword.", "Over 400 pages.",
               "Published by a leading house.", "A gripping read for all ages."],
    ),
    "Clothing & Accessories": dict(
        n=40,
        nouns=["cotton shirt", "denim jeans", "summer dress", "leather belt", "wool jacket", "silk saree",
               "running shoes", "kurta", "sunglasses", "handbag"],
        adj=["slim fit", "casual", "printed", "breathable", "stylish", "regular fit"],
        extra=["Machine wash cold.", "Available in all sizes.", "Soft fabric for daily wear.",
               "Pair it with sneakers.", "Colour may vary slightly."],
    ),
    "Electronics": dict(
        n=40,
        nouns=["wireless earbuds", "usb charger", "bluetooth speaker", "power bank", "smart watch",
               "hdmi cable", "laptop stand", "led monitor", "wifi router"],
        adj=["fast charging", "portable", "noise cancelling", "high speed", "compact", "rechargeable"],
        extra=["Battery lasts up to 20 hours.", "1 year manufacturer warranty.", "Compatible with all phones.",
               "Plug and play setup.", "Includes a type-c cable."],
    ),
}

# Cross-category decoys so keyword rules and baselines are not perfect.
ECOM_DECOYS = {
    "Household": ["Keeps your charger and cables tidy.", "Holds paperback books upright.",
                  "Fits a cotton laundry bag."],
    "Books": ["A guide to kitchen design.", "Covers bluetooth basics for beginners."],
    "Clothing & Accessories": ["Comes in a storage box.", "Has a pocket for your usb stick."],
    "Electronics": ["Looks good on a kitchen shelf.", "Ships with a printed novel-length manual."],
}

TWEET = {
    "negative": dict(n=260, words=["terrible", "worst", "hate", "awful", "disappointed", "broken", "angry",
                                   "never again", "rude", "delayed"]),
    "neutral": dict(n=96, words=["update", "announced", "schedule", "today", "meeting", "report", "info",
                                 "released", "changes"]),
    "positive": dict(n=244, words=["love", "great", "awesome", "thanks", "happy", "amazing", "best",
                                   "wonderful", "excellent"]),
}
TWEET_SUBJECTS = ["the flight", "customer service", "my order", "the new phone", "the app", "this store",
                  "the airline", "the delivery", "the hotel", "the support team"]


def ecommerce_rows(rng):
    rows = []
    for label, spec in ECOM.items():
        for i in range(spec["n"]):
            parts = [f"{rng.choice(spec['adj']).capitalize()} {rng.choice(spec['nouns'])}"]
            parts.append(rng.choice(spec["extra"]))
            if rng.random() < 0.5:
                parts.append(rng.choice(spec["extra"]))
            if rng.random() < 0.2:
                parts.append(rng.choice(ECOM_DECOYS[label]))
            if rng.random() < 0.15:
                parts.append(f"Price: Rs. {rng.randint(99, 4999)}, free shipping")
            if rng.random() < 0.08:
                parts.append("<b>Limited offer</b> see https://shop.example.com/item")
            rows.append((" ".join(parts), label))
    rng.shuffle(rows)
    return rows


def tweet_rows(rng):
    rows = []
    for label, spec in TWEET.items():
        for _ in range(spec["n"]):
            words = rng.sample(spec["words"], 2)
            text = f"{words[0]} experience with {rng.choice(TWEET_SUBJECTS)}, {words[1]}"
            if rng.random() < 0.5:
                text = f"@user{rng.randint(1, 999)} " + text
            if rng.random() < 0.4:
                text += f" #{rng.choice(['travel', 'fail', 'win', 'news', 'monday'])}"
            if rng.random() < 0.3:
                text += f" https://t.co/{rng.randint(10000, 99999)}"
            if rng.random() < 0.2:
                text += f" flight {rng.randint(100, 9999)} &amp; gate {rng.randint(1, 40)}"
            # Neutral tweets sometimes borrow a sentiment word.
            if label == "neutral" and rng.random() < 0.25:
                text += " " + rng.choice(TWEET["positive"]["words"] + TWEET["negative"]["words"])
            rows.append((text, label))
    rng.shuffle(rows)
    return rows


def write_csv(path, rows):
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["text", "label"])
        w.writerows(rows)


EXTRA_PORTER_WORDS = """
caresses ponies ties caress cats feed agreed plastered bled motoring sing conflated troubled sized
hopping tanned falling hissing fizzed failing filing happy sky relational conditional rational valenci
hesitanci digitizer conformabli radicalli differentli vileli analogousli vietnamization predication
operator feudalism decisiveness hopefulness callousness formaliti sensitiviti sensibiliti triplicate
formative formalize electriciti electrical hopeful goodness revival allowance inference airliner
gyroscopic adjustable defensible irritant replacement adjustment dependent adoption homologou communism
activate angulariti homologous effective bowdlerize probate rate cease controll roll generalizations
oscillators running quickly abandoned abilities absolutely accompanied according accustomed generously
knightly meetings possessed skies dying lying tying news innings outing canning sensational traditional
reference colonizer plotted a as is by yes eed bled ied ies sses ational tional enci anci izer abli alli
entli eli ousli ization ation ator alism iveness fulness ousness aliti iviti biliti icate ative alize
iciti ical ful ness al ance ence er ic able ible ant ement ment ent ion ou ism ate iti ous ive ize
agreement generalization classification categories electronics accessories household clothing books
""".split()


def porter_sample(words):
    from nltk.stem.porter import PorterStemmer

    stemmer = PorterStemmer(mode=PorterStemmer.ORIGINAL_ALGORITHM)
    lines = [f"{w} {stemmer.stem(w)}" for w in sorted(words)]
    (HERE / "porter_sample.txt").write_text(
        "# word stem, original Porter algorithm reference output\n" + "\n".join(lines) + "\n")


def main():
    rng = random.Random(20240131)
    ecom = ecommerce_rows(rng)
    tweets = tweet_rows(rng)
    write_csv(HERE / "ecommerce_200.csv", ecom)
    write_csv(HERE / "tweets_600.csv", tweets)
    vocab = set(EXTRA_PORTER_WORDS)
    for text, _ in ecom + tweets:
        vocab.update(re.findall(r"[a-z]+", text.lower()))
    try:
        porter_sample(vocab)
    except ImportError:
        print("nltk missing; porter_sample.txt left unchanged")


if __name__ == "__main__":
    main()
