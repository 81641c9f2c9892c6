import sys
import time

sys.stdin.read()
time.sleep(float(sys.argv[1]) if len(sys.argv) > 1 else 30)
