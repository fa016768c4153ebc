from acflow.runner.utils.csv_output import read_csv, to_frame, write_csv

__all__ = ['write_csv', 'read_csv', 'to_frame']
