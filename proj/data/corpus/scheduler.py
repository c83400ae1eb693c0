import heapq
import itertools
import time


class Scheduler:
    def __init__(self):
        self.queue = []
        self.counter = itertools.count()
        self.entries = {}

    def schedule(self, when, name, action):
        entry = (when, next(self.counter), name, action)
        self.entries[name] = entry
        heapq.heappush(self.queue, entry)

    def cancel(self, name):
        entry = self.entries.pop(name, None)
        return entry is not None

    def run_pending(self, now=None):
        now = time.monotonic() if now is None else now
        fired = []
        while self.queue and self.queue[0][0] <= now:
            when, tick, name, action = heapq.heappop(self.queue)
            if self.entries.get(name) is None:
                continue
            del self.entries[name]
            action()
            fired.append(name)
        return fired
