// Optimistic actions: apply locally at once, reconcile with the server's
// answer (server truth wins), roll back when the call fails.

export interface OptimisticAction<T> {
  apply: () => T; // returns a snapshot used for rollback
  remote: () => Promise<unknown>;
  reconcile: (serverResponse: unknown) => void;
  rollback: (snapshot: T) => void;
  onError?: (error: Error) => void;
}

const pending = new Set<Promise<unknown>>();

export function run<T>(action: OptimisticAction<T>): Promise<void> {
  const snapshot = action.apply();
  const flight = action
    .remote()
    .then((response) => action.reconcile(response))
    .catch((error: Error) => {
      action.rollback(snapshot);
      action.onError?.(error);
    });
  pending.add(flight);
  return flight.finally(() => pending.delete(flight)).then(() => undefined);
}

export function pendingCount(): number {
  return pending.size;
}

export async function settled(): Promise<void> {
  while (pending.size) {
    await Promise.all([...pending]);
  }
}
