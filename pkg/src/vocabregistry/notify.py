"""Notification fan-out, the in-app feed, digests, and the durable outbox.

Email is out of scope: anything that would have been mailed is appended to the
outbox file, one tab-separated line per message
(timestamp, recipient, kind, subject id).
"""

from __future__ import annotations

from .models import Channel, Notification, NotificationKind, User
from .store import Store


def emit(store: Store, recipient: str, kind: NotificationKind, subject_id: str) -> Notification:
    """Create one notification for one recipient on their preferred channel.
    Immediate-outbox users get the line written right away; digest users get it
    bundled by generate_digest."""
    user = store.user(recipient)
    note = Notification(
        id=store.new_id("n"),
        recipient=recipient,
        kind=kind,
        subject_id=subject_id,
        created_at=store.clock(),
        channel=user.notify_channel,
    )
    store.notifications[note.id] = note
    if note.channel is Channel.IMMEDIATE_OUTBOX:
        _append_outbox(store, [note])
        note.delivered = True
    return note


def notify_trackers(store: Store, term_id: str, kind: NotificationKind,
                    exclude: str | None = None) -> list[Notification]:
    return [
        emit(store, u.id, kind, term_id)
        for u in store.trackers_of(term_id)
        if u.id != exclude
    ]


def feed(store: Store, user_id: str, limit: int = 50) -> list[Notification]:
    """Undelivered notifications first, then recent delivered ones."""
    store.user(user_id)
    mine = sorted(
        (n for n in store.notifications.values() if n.recipient == user_id),
        key=lambda n: (n.delivered, _sort_key(n)),
    )
    return mine[:limit]


def _sort_key(n: Notification):
    return (n.created_at, n.id)


def generate_digest(store: Store, user_id: str) -> str:
    """Bundle the user's undelivered notifications into one outbox document
    and mark them delivered. Delivery is monotone: a second digest straight
    after is empty."""
    user = store.user(user_id)
    pending = sorted(
        (n for n in store.notifications.values() if n.recipient == user_id and not n.delivered),
        key=_sort_key,
    )
    lines = [_outbox_line(store, user, n) for n in pending]
    for n in pending:
        n.delivered = True
    doc = "\n".join(lines)
    if pending and store.outbox_path is not None:
        with open(store.outbox_path, "a") as fh:
            fh.write(doc + "\n")
    return doc


def scheduled_digests(store: Store) -> int:
    """The periodic digest pass: bundle undelivered notifications for every
    digest-channel user. Returns the number of digests written."""
    written = 0
    for user in list(store.users.values()):
        if user.notify_channel is not Channel.DIGEST_OUTBOX:
            continue
        if generate_digest(store, user.id):
            written += 1
    return written


def _outbox_line(store: Store, user: User, n: Notification) -> str:
    return "\t".join([n.created_at.isoformat(), user.handle, n.kind.value, n.subject_id])


def _append_outbox(store: Store, notes: list[Notification]) -> None:
    if store.outbox_path is None:
        return
    with open(store.outbox_path, "a") as fh:
        for n in notes:
            fh.write(_outbox_line(store, store.user(n.recipient), n) + "\n")
