class _Commands:
    def __init__(self):
        self.FitCommand = "fit"
        self.EvalCommand = "eval"
        self.ReportCommand = "report"
        self.GenCommand = "gen"


Commands = _Commands()
