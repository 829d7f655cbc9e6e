"""
Parallel sweeps with a deterministic, task-ordered reduce.

Workers pull (index, task) pairs from a work queue until they see the stop
sentinel and push (index, ok, value) onto a results queue. Results are
placed by index, so the output of run_tasks() does not depend on worker
count or scheduling. func and tasks must be picklable.
"""
import multiprocessing as mp
import sys
import time
from . import util

try:
    import mkl
    mkl.set_num_threads(1)
except ImportError:
    pass

# Stop sentinel value for queues
stop = "STOP"


class Progress:
    """Print progress to stderr every `every` percent of completed tasks."""

    def __init__(self, total, every=None, label="Task"):
        if every is not None and (every <= 0 or every > 100):
            raise ValueError("every must be > 0 and <= 100")
        self.total = total
        self.every = every
        self.label = label
        self.done = 0
        self.last = 0  # Last progress milestone in increments of every
        self.t0 = time.time()

    def update(self):
        self.done += 1
        if not self.every:
            return
        perc = float(self.done) / self.total * 100
        # Round down to closest every%
        milestone = int(perc / self.every) * self.every
        if milestone > self.last:
            elapsed = time.time() - self.t0
            print(f"{self.label}: {self.done}/{self.total} {perc:5.4}% elapsed: {elapsed:.2f}s",
                  file=sys.stderr)
            sys.stderr.flush()
            self.last = milestone


def run_tasks(func, tasks, worker_count=1, every=None, label="Task"):
    """
    Apply func to each task, in worker processes if worker_count > 1.

    Parameters
    ----------
    func: callable
        Module level function of one argument.
    tasks: iterable
        Arguments for func.
    worker_count: int, default 1
        Number of worker processes. 1 runs inline in this process.
    every: float, optional
        Percent progress output resolution. No progress output if None.
    label: str
        Prefix for progress lines.

    Returns
    -------
    list
        func(task) for each task, in task order.
    """
    tasks = list(tasks)
    if worker_count < 1:
        raise ValueError("worker_count must be > 0")
    if not tasks:
        return []
    progress = Progress(len(tasks), every=every, label=label)
    worker_count = min(len(tasks), worker_count)

    if worker_count == 1:
        results = []
        for task in tasks:
            results.append(func(task))
            progress.update()
        return results

    work_q = mp.Queue()
    results_q = mp.Queue()
    workers = []
    for _ in range(worker_count):
        p = mp.Process(target=do_work, args=(func, work_q, results_q))
        p.start()
        workers.append(p)

    # Add work to the work queue
    for i, task in enumerate(tasks):
        work_q.put((i, task))
    # Put sentinel stop values on the input queue, one for each consumer process
    for _ in range(worker_count):
        work_q.put(stop)

    results = [None] * len(tasks)
    failure = None
    try:
        for _ in range(len(tasks)):
            i, ok, value = results_q.get()
            if not ok:
                print(f"{label} {i} failed: {value}", file=sys.stderr)
                failure = value
                break
            results[i] = value
            progress.update()
    finally:
        for w in workers:
            w.terminate()
            w.join()
    if failure is not None:
        raise failure
    return results


@util.quiet_keyboardinterrupt
def do_work(func, work_q, results_q):
    """Worker loop. Exceptions are sent back to the parent, not raised here."""
    work = work_q.get()
    while work != stop:
        i, task = work
        try:
            results_q.put((i, True, func(task)))
        except Exception as e:
            results_q.put((i, False, e))
        work = work_q.get()
