"""Prompt text sent to language-model players.

The rules block and the ``optimal`` character are fixed strings; decision
templates only substitute game values into their placeholders.
"""
from __future__ import annotations

RULES = """KUHHANDEL MASTER - RULES

GOAL: Complete quartets (4 cards of same animal).
Score = (sum of complete quartet values) × (number of quartets).
Example: 1 donkey quartet (500) + 1 horse quartet (1000)
         = (500+1000) × 2 quartets = 3000 points.
Example: 1 horse quartet alone = 1000 × 1 = 1000 points.
         Incomplete sets score 0.

ANIMALS (Complete Quartet Value):
Chicken=10, Goose=40, Cat=90, Dog=160, Sheep=250,
Goat=350, Donkey=500, Pig=650, Cow=800, Horse=1000

YOUR TURN - Choose one:

[A] AUCTION: Draw a card from the deck. Other players bid
    (each bid must exceed the previous by at least 10 coins).
    Then you (the auctioneer) choose:
    - ACCEPT highest bid: they pay you, get animal
    - BUY-RIGHT: you pay that amount TO highest bidder,
      YOU keep animal
    No change given - must pay exact or overpay.
    OVERBID: If the highest bidder cannot pay, they must
    reveal all their money cards. The auction restarts and
    the overbidder may not overbid again.

[B] KUHHANDEL (Cattle Trade): Trade an animal type you
    BOTH own with an opponent.
    - You place a hidden offer face-down (using coin cards;
      zeros allowed for bluffing)
    - Opponent chooses:
      - ACCEPT: takes your hidden coin cards (without seeing
        them first), gives you their animal
      - COUNTER: places their own face-down offer
    - If countered: heaps are swapped and counted secretly
      by each player. Whoever OFFERED more coins wins and
      takes the animal(s). The exact amounts and card counts
      stay private; other players learn only who won.
    - Ties: repeat with new offers up to 3x, then challenger
      wins automatically.
    - If both have 2+: ALL cards of that type trade."""

CHARACTERS = {
    "optimal": """You are an AI playing Kuhhandel Master. Your goal is to win.
Play optimally to maximize your expected score.""",
}


def system_prompt(character: str = "optimal") -> str:
    return RULES + "\n\n" + CHARACTERS[character]


TURN_CHOICE = """{observation}

It's your turn. You must choose ONE action:
1. AUCTION - Flip a card from the deck and auction it
2. KUHHANDEL - Challenge another player to trade an
   animal you both own

Respond with JSON:
{{"reasoning": "...", "action": "auction" or "kuhhandel"}}"""

# once the deck is empty an auction is no longer possible
TURN_CHOICE_FINAL = """{observation}

It's your turn. The deck is empty. You must choose ONE action:
1. KUHHANDEL - Challenge another player to trade an
   animal you both own
2. PASS - End your turn without trading

Respond with JSON:
{{"reasoning": "...", "action": "kuhhandel" or "pass"}}"""

BID_CANONICAL = """{observation}

CANONICAL AUCTION - Simultaneous Bidding Round
Round {round}
- Card: {animal} (quartet value: {value})
- Current price: {price}
- Current winner: {winner}
- You have: {have} of this animal
- Your money: {wealth} coins ({cards})

All bidders submit simultaneously. To win, bid HIGHER
than current price. You may bid more than you can pay.
If you win and cannot pay, your total wealth is revealed
to all players and the auction restarts from 0. A second
overbid eliminates you from this auction.

IMPORTANT: Bids must be multiples of 10 coins.

Respond with JSON:
{{"reasoning": "...", "action": "pass" or "bid",
 "amount": <multiple of 10>}}"""

BID_FAST = """{observation}

SEALED-BID AUCTION - One Bid Only
- Card: {animal} (quartet value: {value})
- You have: {have} of this animal
- Your money: {wealth} coins ({cards})

Every bidder submits one hidden bid. The highest bid wins.
A bid above your total money is reduced to your total money.

IMPORTANT: Bids must be multiples of 10 coins.

Respond with JSON:
{{"reasoning": "...", "action": "pass" or "bid",
 "amount": <multiple of 10>}}"""

BID_LEGACY = """{observation}

AUCTION - Your Turn to Bid
- Card: {animal} (quartet value: {value})
- Current price: {price}
- Current winner: {winner}
- You have: {have} of this animal
- Your money: {wealth} coins ({cards})

Bidders take turns. Passing drops you out of this auction.
A bid above your total money is reduced to your total money.

IMPORTANT: Bids must be multiples of 10 coins.

Respond with JSON:
{{"reasoning": "...", "action": "pass" or "bid",
 "amount": <multiple of 10>}}"""

BUY_RIGHT = """{observation}

BUY-RIGHT DECISION (you are auctioneer)
- Card: {animal} (quartet value: {value})
- Highest bid: {price} by Player {bidder}
- You have: {have} of this animal
- Your money: {wealth} coins ({cards})

Options:
- SELL: Take {price} coins, Player {bidder} gets the card
- BUY_RIGHT: Pay {price} coins to Player {bidder}, YOU keep the card

Respond with JSON:
{{"reasoning": "...", "decision": "sell" or "buy_right"}}"""

TC_INIT = """{observation}

KUHHANDEL - Choose target and make offer:
Valid targets:
{targets}

Remember:
- You're trading animals you BOTH own
- Your hidden offer is a set of money cards from your hand
- The opponent sees how many cards you offer, but not
  their values
- You can include 0-coin cards to make your offer look
  bigger (bluff)
- Opponent will either ACCEPT (take money, give animal)
  or COUNTER

Your available card values: {hand}
Select exactly which cards to include in your offer.

Respond with JSON:
{{"reasoning": "...", "target_player": <id>,
 "animal": "<type>",
 "offer_cards": [10, 10, 0, 0]}}"""

TC_DEFENSE = """{observation}

KUHHANDEL - You are being challenged!
- Player {initiator} wants your {animal}
- You have {have} of this animal (quartet value: {value})
- Trade size: {size} card(s)
- Their offer is face-down ({offer_count} card(s), unknown value)

Options:
1. ACCEPT - Take their hidden money, give them your
   animal(s)
2. COUNTER - Select cards from your hand as counter-offer.
   Offers are revealed and exchanged. Winner = whoever
   OFFERED more money. Loser gives up animal(s).

Your available card values: {hand}
If countering, select exactly which cards to include.

Respond with JSON:
{{"reasoning": "...", "action": "accept" or "counter",
 "counter_cards": [50, 10, 10]}}"""

TC_TIE = """{observation}

KUHHANDEL TIE - Make a new offer!
- Trading: {animal} with Player {opponent}
- Previous offers tied (your offer was ~{previous})
- Tie count: {ties} (after {limit} ties, {default_winner} automatically)

Your available card values: {hand}
Select exactly which cards to include in your new offer.

Respond with JSON:
{{"reasoning": "...",
 "offer_cards": [50, 10, 10, 0]}}"""

SCRATCHPAD = """Update your game notes based on these new events.
Keep under 300 tokens.
Focus on: opponent wealth signals, behavioral patterns,
quartet progress, trade outcomes.

Current notes:
{notes}

New events:
{events}

Respond with ONLY the updated notes, nothing else."""

EMPTY_NOTES = "(none yet)"

# follow-ups inside one decision
JSON_ONLY = """Your previous response was cut off before the JSON action was complete.
Reply with ONLY the JSON action object, no reasoning text.

{instruction}"""

CARDS_NOT_IN_HAND = """Invalid selection: {requested} is not a set of cards you hold.
Your available card values: {hand}
Choose only from these cards (each card at most once).

{instruction}"""

RESPONSE_FORMATS = {
    "turn_choice": '{"action": "auction" or "kuhhandel"}',
    "turn_choice_final": '{"action": "kuhhandel" or "pass"}',
    "bid": '{"action": "pass" or "bid", "amount": <multiple of 10>}',
    "buy_right": '{"decision": "sell" or "buy_right"}',
    "tc_init": '{"target_player": <id>, "animal": "<type>", "offer_cards": [...]}',
    "tc_defense": '{"action": "accept" or "counter", "counter_cards": [...]}',
    "tc_tie_retry": '{"offer_cards": [...]}',
}


def response_instruction(kind: str) -> str:
    return "Respond with JSON:\n" + RESPONSE_FORMATS[kind]
