"""Rate analysis: closed forms, Monte Carlo, relay comparison and robustness"""
